"""Star-cover complexes of relative simplicial complexes.

The partition complex of Psi keeps k[Psi] in position -1 and, in position
i >= 0, the direct sum of star modules k[st_tau Psi] over faces tau of
Delta with |tau| = i + 1. The differential restricts each star to the
stars of its one-larger cofaces with Cech signs from the global vertex
order; homology concentrates in coarse degree 0 where it computes the
relative cohomology of Psi. A linear system acts summandwise, giving the
reduced complex behind the partition-of-unity dimension identity, and
tensoring with the Koszul complex gives double complexes totalized slice
by slice.

Two variants change the columns. The interior complex of a disk keeps
only stars of strongly interior faces (every vertex off the boundary)
with the absolute face ring up front. The subdivision complex of a
declared cell structure uses face rings of subdivided cells in
decreasing dimension, with incidence signs frozen by orienting each
cell's fundamental chain; the leading junction map from k[Delta] is not
part of a cochain complex (its composite with the cellular differential
survives on boundary walls), but only its kernel is ever consumed.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import combinations, permutations

import numpy as np

from .complexes import (
    ComplexError,
    RelativeComplex,
    SimplicialComplex,
    as_relative,
    relative_cohomology_dims,
    _bit_positions,
    _popcount,
)
from .facering import (
    LinearFormSequence,
    monomial_basis,
    multiplication_matrix,
    quotient_presentation,
)
from .linalg import PrimeField, matmul, rank

VARIANTS = ("full", "interior", "subdivision")


class PartitionError(ValueError):
    pass


@lru_cache(maxsize=None)
def _restriction(src: RelativeComplex, dst: RelativeComplex, j: int) -> np.ndarray:
    """Monomial kill map k[src]_j -> k[dst]_j; entries 0/1, field independent."""
    sb = monomial_basis(src, j)
    db = monomial_basis(dst, j)
    mat = np.zeros((len(db), len(sb)), dtype=np.int64)
    for col, alpha in enumerate(sb):
        row = db.index.get(alpha)
        if row is not None:
            mat[row, col] = 1
    return mat


def restriction_matrix(src, dst, j: int, field: PrimeField | None = None) -> np.ndarray:
    return _restriction(as_relative(src), as_relative(dst), j).copy()


def _cech_sign(tau: int, bit: int) -> int:
    return -1 if _popcount(tau & (bit - 1)) % 2 else 1


class PartitionComplexSpec:
    """Columns of a star-cover complex, one summand per chosen face or cell.

    positions maps the cohomological index i to an ordered list of
    (descriptor, module) pairs; descriptors are face masks for the full
    and interior variants and cell indices for the subdivision variant.
    """

    __slots__ = ("psi", "variant", "positions", "structure", "_signs")

    def __init__(self, psi: RelativeComplex, variant: str, positions: dict,
                 structure=None, signs=None):
        if variant not in VARIANTS:
            raise PartitionError(f"variant must be one of {VARIANTS}")
        self.psi = psi
        self.variant = variant
        self.positions = positions
        self.structure = structure
        self._signs = signs or {}

    @classmethod
    def full(cls, psi) -> "PartitionComplexSpec":
        psi = as_relative(psi)
        positions: dict[int, list] = {}
        for tau in sorted(psi.delta.faces):
            positions.setdefault(_popcount(tau) - 1, []).append((tau, psi.star(tau)))
        return cls(psi, "full", positions)

    @classmethod
    def interior(cls, disk) -> "PartitionComplexSpec":
        """Stars of strongly interior faces of a disk pair (Delta, boundary)."""
        disk = as_relative(disk)
        delta = disk.delta
        interior = 0
        for v in delta.vertex_masks():
            if v not in disk.gamma.faces:
                interior |= v
        positions: dict[int, list] = {-1: [(0, RelativeComplex(delta))]}
        for tau in sorted(delta.faces):
            if tau and tau & interior == tau:
                summand = (tau, RelativeComplex(delta.star(tau)))
                positions.setdefault(_popcount(tau) - 1, []).append(summand)
        return cls(disk, "interior", positions)

    @classmethod
    def subdivision(cls, structure: "SubdivisionStructure") -> "PartitionComplexSpec":
        d = structure.dim
        positions: dict[int, list] = {-1: [("delta", RelativeComplex(structure.delta))]}
        for idx, cell in enumerate(structure.cells):
            i = d - cell["dim"]
            positions.setdefault(i, []).append((idx, RelativeComplex(cell["subcomplex"])))
        signs = dict(structure.incidence_signs)
        return cls(RelativeComplex(structure.delta), "subdivision", positions,
                   structure=structure, signs=signs)

    @property
    def max_position(self) -> int:
        return max(self.positions, default=-1)

    def summands(self, i: int) -> list:
        return self.positions.get(i, [])

    def space_dim(self, i: int, j: int) -> int:
        if j < 0:
            return 0
        return sum(len(monomial_basis(mod, j)) for _, mod in self.summands(i))

    def _block_sign(self, i: int, src_desc, dst_desc) -> int:
        if self.variant == "subdivision":
            if i == -1:
                return 1
            return self._signs.get((src_desc, dst_desc), 0)
        # face-mask variants connect tau to tau | bit
        extra = dst_desc & ~src_desc
        if src_desc & dst_desc != src_desc or _popcount(extra) != 1:
            return 0
        return _cech_sign(dst_desc, extra)

    def differential(self, i: int, j: int, field: PrimeField) -> np.ndarray:
        """Matrix of position i into position i + 1 at coarse degree j."""
        src = self.summands(i)
        dst = self.summands(i + 1)
        src_dims = [len(monomial_basis(mod, j)) for _, mod in src] if j >= 0 else []
        dst_dims = [len(monomial_basis(mod, j)) for _, mod in dst] if j >= 0 else []
        mat = np.zeros((sum(dst_dims), sum(src_dims)), dtype=np.int64)
        if not mat.size:
            return mat
        p = field.p
        col = 0
        for (sdesc, smod), sdim in zip(src, src_dims):
            row = 0
            for (ddesc, dmod), ddim in zip(dst, dst_dims):
                sign = self._block_sign(i, sdesc, ddesc)
                if sign and sdim and ddim:
                    block = _restriction(smod, dmod, j)
                    mat[row:row + ddim, col:col + sdim] = block if sign > 0 else (p - block) % p
                row += ddim
            col += sdim
        return mat

    def homology_dims(self, field: PrimeField, max_degree: int | None = None) -> dict:
        """{(i, j): dim} over i in [-1, max position], j in [0, max_degree]."""
        if max_degree is None:
            d = self.psi.dim
            max_degree = (d if d is not None else -1) + 2
        ranks: dict[tuple[int, int], int] = {}

        def rk(i, j):
            if (i, j) not in ranks:
                if self.space_dim(i, j) == 0 or self.space_dim(i + 1, j) == 0:
                    ranks[(i, j)] = 0
                else:
                    ranks[(i, j)] = rank(self.differential(i, j, field), field.p)
            return ranks[(i, j)]

        out = {}
        for i in range(-1, self.max_position + 1):
            for j in range(max_degree + 1):
                out[(i, j)] = self.space_dim(i, j) - rk(i, j) - rk(i - 1, j)
        return out


def partition_homology_dims(psi, field: PrimeField,
                            max_degree: int | None = None) -> dict:
    """Homology table of the full star-cover complex of Psi."""
    return PartitionComplexSpec.full(psi).homology_dims(field, max_degree)


class ReducedPartitionComplex:
    """The star-cover complex with every summand replaced by its quotient.

    Each summand module is presented degreewise modulo <Theta>; the Cech
    differential descends because restriction commutes with multiplication
    by linear forms, and in quotient coordinates the block from summand q
    to summand q' at degree j is q'.reduce(j, R @ q.lift(j)).
    """

    def __init__(self, pspec: PartitionComplexSpec, theta: LinearFormSequence,
                 field: PrimeField, max_position: int | None = None):
        self.pspec = pspec
        self.theta = theta
        self.field = field
        top = pspec.max_position if max_position is None else max_position
        self.max_position = top
        self.quotients: dict[int, list] = {}
        for i in range(-1, top + 1):
            rows = []
            for desc, mod in pspec.summands(i):
                q = quotient_presentation(mod, theta, field)
                if not q.finite_at_cap:
                    raise PartitionError(
                        f"Theta is not a parameter system for the summand at {desc!r}")
                rows.append((desc, mod, q))
            self.quotients[i] = rows

    def space_dim(self, i: int, j: int) -> int:
        if j < 0:
            return 0
        return sum(q.dim(j) for _, _, q in self.quotients.get(i, []))

    def differential(self, i: int, j: int) -> np.ndarray:
        src = self.quotients.get(i, [])
        dst = self.quotients.get(i + 1, [])
        src_dims = [q.dim(j) for _, _, q in src]
        dst_dims = [q.dim(j) for _, _, q in dst]
        mat = np.zeros((sum(dst_dims), sum(src_dims)), dtype=np.int64)
        if not mat.size:
            return mat
        p = self.field.p
        col = 0
        for (sdesc, smod, sq), sdim in zip(src, src_dims):
            row = 0
            lifted = sq.lift(j) if sdim else None
            for (ddesc, dmod, dq), ddim in zip(dst, dst_dims):
                sign = self.pspec._block_sign(i, sdesc, ddesc)
                if sign and sdim and ddim:
                    r = _restriction(smod, dmod, j)
                    block = dq.reduce(j, matmul(r, lifted, p))
                    mat[row:row + ddim, col:col + sdim] = block if sign > 0 else (p - block) % p
                row += ddim
            col += sdim
        return mat

    def homology_dims(self, max_degree: int | None = None) -> dict:
        if max_degree is None:
            d = self.pspec.psi.dim
            max_degree = (d if d is not None else -1) + 2
        ranks: dict[tuple[int, int], int] = {}

        def rk(i, j):
            if (i, j) not in ranks:
                if self.space_dim(i, j) == 0 or self.space_dim(i + 1, j) == 0:
                    ranks[(i, j)] = 0
                else:
                    ranks[(i, j)] = rank(self.differential(i, j), self.field.p)
            return ranks[(i, j)]

        out = {}
        for i in range(-1, self.max_position + 1):
            for j in range(max_degree + 1):
                out[(i, j)] = self.space_dim(i, j) - rk(i, j) - rk(i - 1, j)
        return out

    def front_kernel_dims(self, max_degree: int) -> dict[int, int]:
        """Degreewise kernel of the first map, position -1 into position 0."""
        out = {}
        for j in range(max_degree + 1):
            dim = self.space_dim(-1, j)
            if dim == 0:
                out[j] = 0
                continue
            out[j] = dim - rank(self.differential(-1, j), self.field.p)
        return out


def reduced_partition_homology(psi, theta: LinearFormSequence, field: PrimeField,
                               max_degree: int | None = None) -> dict:
    """Homology table of P*/<Theta> for the full variant."""
    pspec = PartitionComplexSpec.full(psi)
    return ReducedPartitionComplex(pspec, theta, field).homology_dims(max_degree)


class DoubleComplexSlice:
    """One internal degree of the star-cover complex tensored with Koszul.

    The (a, b) block is position a of the star complex at coefficient
    degree t = j - n + b, tensored with the b-th wedge of k^n; the
    horizontal map restricts stars and the vertical map is the Koszul
    step, which commute. The total differential applies the vertical map
    with sign (-1)^a and squares to zero.
    """

    def __init__(self, pspec: PartitionComplexSpec, theta: LinearFormSequence,
                 field: PrimeField, j: int):
        self.pspec = pspec
        self.theta = theta
        self.field = field
        self.j = j
        self.n = len(theta)
        self._ranks: dict[int, int] = {}

    def _t(self, b: int) -> int:
        return self.j - self.n + b

    def grid_dim(self, a: int, b: int) -> int:
        if b < 0 or b > self.n:
            return 0
        t = self._t(b)
        if t < 0:
            return 0
        return math.comb(self.n, b) * self.pspec.space_dim(a, t)

    def horizontal(self, a: int, b: int) -> np.ndarray:
        t = self._t(b)
        pd = self.pspec.differential(a, t, self.field)
        wedge = math.comb(self.n, b)
        return np.kron(np.eye(wedge, dtype=np.int64), pd)

    def vertical(self, a: int, b: int) -> np.ndarray:
        """Koszul step (a, b) -> (a, b + 1), summandwise multiplication."""
        if b < 0 or b >= self.n:
            return np.zeros((self.grid_dim(a, b + 1), self.grid_dim(a, b)), dtype=np.int64)
        t = self._t(b)
        msrc = self.pspec.space_dim(a, t)
        mdst = self.pspec.space_dim(a, t + 1)
        rows = math.comb(self.n, b + 1) * mdst
        cols = math.comb(self.n, b) * msrc
        mat = np.zeros((rows, cols), dtype=np.int64)
        if not mat.size:
            return mat
        p = self.field.p
        dst_index = {S: k for k, S in enumerate(combinations(range(self.n), b + 1))}
        mults = {}
        for u in range(self.n):
            diag = np.zeros((mdst, msrc), dtype=np.int64)
            r = c = 0
            for _, mod in self.pspec.summands(a):
                sb = len(monomial_basis(mod, t))
                db = len(monomial_basis(mod, t + 1))
                if sb and db:
                    diag[r:r + db, c:c + sb] = multiplication_matrix(
                        mod, self.theta[u], t, self.field)
                r += db
                c += sb
            mults[u] = diag
        for ci, S in enumerate(combinations(range(self.n), b)):
            inside = set(S)
            for u in range(self.n):
                if u in inside:
                    continue
                block = mults[u]
                if sum(1 for s in S if s < u) % 2:
                    block = (p - block) % p
                ri = dst_index[tuple(sorted(S + (u,)))]
                mat[ri * mdst:(ri + 1) * mdst, ci * msrc:(ci + 1) * msrc] = block
        return mat

    def _pairs(self, k: int) -> list[tuple[int, int]]:
        out = []
        for a in range(-1, self.pspec.max_position + 1):
            b = k - a
            if 0 <= b <= self.n and self._t(b) >= 0:
                out.append((a, b))
        return out

    def tot_dim(self, k: int) -> int:
        return sum(self.grid_dim(a, b) for a, b in self._pairs(k))

    def tot_differential(self, k: int) -> np.ndarray:
        src = self._pairs(k)
        dst = self._pairs(k + 1)
        src_dims = [self.grid_dim(a, b) for a, b in src]
        dst_dims = [self.grid_dim(a, b) for a, b in dst]
        offs_src = np.cumsum([0] + src_dims)
        offs_dst = np.cumsum([0] + dst_dims)
        mat = np.zeros((sum(dst_dims), sum(src_dims)), dtype=np.int64)
        if not mat.size:
            return mat
        p = self.field.p
        dpos = {ab: k2 for k2, ab in enumerate(dst)}
        for ci, (a, b) in enumerate(src):
            if src_dims[ci] == 0:
                continue
            hi = dpos.get((a + 1, b))
            if hi is not None and dst_dims[hi]:
                block = self.horizontal(a, b)
                mat[offs_dst[hi]:offs_dst[hi + 1], offs_src[ci]:offs_src[ci + 1]] = block
            vi = dpos.get((a, b + 1))
            if vi is not None and dst_dims[vi]:
                block = self.vertical(a, b)
                if a % 2:
                    block = (p - block) % p
                mat[offs_dst[vi]:offs_dst[vi + 1], offs_src[ci]:offs_src[ci + 1]] = block
        return mat

    def _rank(self, k: int) -> int:
        if k not in self._ranks:
            if self.tot_dim(k) == 0 or self.tot_dim(k + 1) == 0:
                self._ranks[k] = 0
            else:
                self._ranks[k] = rank(self.tot_differential(k), self.field.p)
        return self._ranks[k]

    def homology_dims(self) -> dict[int, int]:
        lo = -1
        hi = self.pspec.max_position + self.n
        return {k: self.tot_dim(k) - self._rank(k) - self._rank(k - 1)
                for k in range(lo, hi + 1)}


def total_complex_homology(psi, theta: LinearFormSequence, field: PrimeField,
                           max_degree: int | None = None) -> dict:
    """{(i, j): dim H^i(Tot)_j} for the full star-cover complex tensored with Koszul."""
    psi = as_relative(psi)
    pspec = PartitionComplexSpec.full(psi)
    if max_degree is None:
        d = psi.dim
        max_degree = (d if d is not None else -1) + 2
    out = {}
    for j in range(max_degree + 1):
        for i, dim in DoubleComplexSlice(pspec, theta, field, j).homology_dims().items():
            out[(i, j)] = dim
    return out


def interior_partition_check(disk, theta: LinearFormSequence, field: PrimeField,
                             max_degree: int | None = None) -> dict:
    """Exactness of the interior star complex and injectivity of its front map.

    The verdict carries the sanity flags rather than gating on them: a
    pair whose boundary is not induced (or that is not a disk at all)
    still gets computed, with the failure visible in the diagnostics.
    """
    disk = as_relative(disk)
    delta = disk.delta
    d = delta.dim if delta.dim is not None else -1
    pspec = PartitionComplexSpec.interior(disk)
    window = max_degree if max_degree is not None else d + 2

    interior_labels = [delta.labels[i] for v in delta.vertex_masks()
                       if v not in disk.gamma.faces for i in _bit_positions(v)]
    gamma_vertices = [delta.labels[i] for v in delta.vertex_masks()
                      if v in disk.gamma.faces for i in _bit_positions(v)]
    boundary_induced = delta.induced(gamma_vertices) == disk.gamma
    acyclic = not any(relative_cohomology_dims(RelativeComplex(delta), field).values())
    bound_coh = relative_cohomology_dims(RelativeComplex(disk.gamma), field)
    sphere = all(dim == (1 if i == d - 1 else 0) for i, dim in bound_coh.items())

    table = pspec.homology_dims(field, max_degree=window)
    exact = not any(table.values())

    reduced = ReducedPartitionComplex(pspec, theta, field, max_position=0)
    kernels = reduced.front_kernel_dims(d)
    injective = not any(kernels.values())

    return {
        "exact": exact,
        "injective_below_top": injective,
        "kernel_dims": kernels,
        "diagnostics": {
            "dim": d,
            "interior_vertices": sorted(interior_labels, key=str),
            "boundary_induced": boundary_induced,
            "delta_acyclic": acyclic,
            "boundary_is_sphere": sphere,
        },
    }


class SubdivisionStructure:
    """A coarse cell structure subdividing a simplicial complex.

    Every cell record declares the facets of its subdivided subcomplex
    inside delta and the facets of its subdivided boundary. Validation
    closes both inside delta, checks purity, checks that top cells cover
    every facet of delta, matches each boundary against the declared
    cells one dimension down, and orients every cell by propagating a
    fundamental chain over its top simplices; incidence signs come from
    comparing the boundary of that chain with the chains of the boundary
    cells.
    """

    def __init__(self, delta: SimplicialComplex, cells: list[dict]):
        if delta.is_void or delta.dim is None:
            raise PartitionError("subdivision structure needs a nonvoid complex")
        self.delta = delta
        self.dim = delta.dim
        self.cells = []
        for idx, rec in enumerate(cells):
            try:
                self.cells.append(self._prepare_cell(rec))
            except (KeyError, ComplexError, PartitionError) as exc:
                raise PartitionError(f"cell {idx}: {exc}") from exc
        self._validate_cover()
        self.incidence: dict[int, list[int]] = {}
        self.incidence_signs: dict[tuple[int, int], int] = {}
        self._match_boundaries()

    def _prepare_cell(self, rec: dict) -> dict:
        dim = int(rec["dim"])
        sub = SimplicialComplex.from_facets(self.delta.labels, rec["facets"])
        if not sub.faces <= self.delta.faces:
            raise PartitionError("declared subcomplex is not inside the ambient complex")
        if sub.dim != dim or not sub.is_pure():
            raise PartitionError(f"subcomplex is not pure of dimension {dim}")
        boundary = SimplicialComplex.from_facets(self.delta.labels,
                                                 rec.get("boundary_facets", []))
        if not boundary.faces <= sub.faces:
            raise PartitionError("declared boundary is not inside the cell")
        chain = _fundamental_chain(sub)
        bvert = [self.delta.labels[i] for m in boundary.faces for i in _bit_positions(m)]
        induced = self.delta.induced(sorted(set(bvert), key=str)) == boundary
        return {"dim": dim, "subcomplex": sub, "boundary": boundary,
                "chain": chain, "boundary_induced": induced}

    def _validate_cover(self) -> None:
        top = [c for c in self.cells if c["dim"] == self.dim]
        if not top:
            raise PartitionError("no top-dimensional cells declared")
        covered = set()
        for c in top:
            covered |= set(c["subcomplex"].facets())
        if covered != set(self.delta.facets()):
            raise PartitionError("top cells do not cover the facets of the complex")

    def _match_boundaries(self) -> None:
        by_dim: dict[int, list[int]] = {}
        for idx, c in enumerate(self.cells):
            by_dim.setdefault(c["dim"], []).append(idx)
        for idx, c in enumerate(self.cells):
            s = c["dim"]
            if s == 0:
                self.incidence[idx] = []
                continue
            walls = by_dim.get(s - 1, [])
            bfaces = c["boundary"].faces
            below = [w for w in walls
                     if self.cells[w]["subcomplex"].faces <= bfaces]
            union = set()
            for w in below:
                union |= self.cells[w]["subcomplex"].faces
            if union != bfaces:
                raise PartitionError(
                    f"cell {idx}: declared boundary is not covered by cells below")
            self.incidence[idx] = below
            bcoef = _chain_boundary(c["chain"])
            seen = set()
            for w in below:
                wfacets = self.cells[w]["subcomplex"].facets()
                if seen & set(wfacets):
                    raise PartitionError(f"cell {idx}: boundary cells overlap")
                seen |= set(wfacets)
                sign = None
                for f in wfacets:
                    coef = bcoef.get(f, 0)
                    want = self.cells[w]["chain"][f]
                    if coef not in (want, -want) or coef == 0:
                        raise PartitionError(
                            f"cell {idx}: boundary chain does not match cell {w}")
                    this = 1 if coef == want else -1
                    if sign is None:
                        sign = this
                    elif sign != this:
                        raise PartitionError(
                            f"cell {idx}: inconsistent orientation against cell {w}")
                self.incidence_signs[(idx, w)] = sign
            uncovered = set(bcoef) - seen
            if any(bcoef[f] for f in uncovered):
                raise PartitionError(
                    f"cell {idx}: geometric boundary leaks outside declared cells")

    def boundary_induced_ok(self) -> tuple[bool, list[int]]:
        """Induced-boundary flag for every cell of dimension >= dim/2."""
        failing = [idx for idx, c in enumerate(self.cells)
                   if 2 * c["dim"] >= self.dim and not c["boundary_induced"]]
        return not failing, failing

    @classmethod
    def from_json(cls, data: dict) -> "SubdivisionStructure":
        delta = SimplicialComplex.from_facets(
            tuple(data["delta"]["vertices"]), data["delta"]["facets"])
        return cls(delta, data["sigma"])

    def to_json(self) -> dict:
        return {
            "delta": {"vertices": list(self.delta.labels),
                      "facets": [list(self.delta.labels_of(f)) for f in self.delta.facets()]},
            "sigma": [
                {"dim": c["dim"],
                 "facets": [list(self.delta.labels_of(f)) for f in c["subcomplex"].facets()],
                 "boundary_facets": [list(self.delta.labels_of(f))
                                     for f in c["boundary"].facets()]}
                for c in self.cells
            ],
        }


def _fundamental_chain(sub: SimplicialComplex) -> dict[int, int]:
    """Coefficients +-1 on the facets making the boundary vanish on interior ridges."""
    facets = sorted(sub.facets())
    s = sub.dim
    if s == 0:
        return {f: 1 for f in facets}
    ridges: dict[int, list[int]] = {}
    for f in facets:
        for i in _bit_positions(f):
            ridges.setdefault(f ^ (1 << i), []).append(f)
    for r, owners in ridges.items():
        if len(owners) > 2:
            raise PartitionError("a ridge lies in more than two facets")
    chain = {facets[0]: 1}
    queue = [facets[0]]
    while queue:
        f = queue.pop()
        for i in _bit_positions(f):
            r = f ^ (1 << i)
            owners = ridges[r]
            if len(owners) != 2:
                continue
            g = owners[0] if owners[1] == f else owners[1]
            want = -chain[f] * _incidence(f, r) * _incidence(g, r)
            if g in chain:
                if chain[g] != want:
                    raise PartitionError("cell subdivision is not orientable")
            else:
                chain[g] = want
                queue.append(g)
    if len(chain) != len(facets):
        raise PartitionError("cell subdivision is not strongly connected")
    return chain


def _incidence(facet: int, ridge: int) -> int:
    missing = facet ^ ridge
    return -1 if _popcount(facet & (missing - 1)) % 2 else 1


def _chain_boundary(chain: dict[int, int]) -> dict[int, int]:
    out: dict[int, int] = {}
    for f, c in chain.items():
        for i in _bit_positions(f):
            r = f ^ (1 << i)
            out[r] = out.get(r, 0) + c * _incidence(f, r)
    return {r: c for r, c in out.items() if c}


def barycentric_subdivision_structure(sigma: SimplicialComplex) -> SubdivisionStructure:
    """Cell structure of sigma realized inside its barycentric subdivision."""
    if sigma.is_void or sigma.dim is None or sigma.dim < 0:
        raise PartitionError("need a complex with at least one vertex")
    delta = sigma.barycentric_subdivision()

    def bary_label(mask: int) -> str:
        return "|".join(str(v) for v in sigma.labels_of(mask))

    def flags(mask: int) -> list[list[str]]:
        out = []
        for perm in permutations(_bit_positions(mask)):
            acc = 0
            chain = []
            for b in perm:
                acc |= 1 << b
                chain.append(bary_label(acc))
            out.append(chain)
        return out

    cells = []
    for m in sorted((f for f in sigma.faces if f), key=lambda m: (_popcount(m), m)):
        boundary = []
        for i in _bit_positions(m):
            sub = m ^ (1 << i)
            if sub:
                boundary.extend(flags(sub))
        cells.append({"dim": _popcount(m) - 1, "facets": flags(m),
                      "boundary_facets": boundary})
    return SubdivisionStructure(delta, cells)


def subdivision_partition_check(structure: SubdivisionStructure,
                                theta: LinearFormSequence, field: PrimeField) -> dict:
    """Kernel of k[Delta]/<Theta> into the quotients of the top cells, degreewise.

    Passes when the kernel vanishes in every degree up to half the
    dimension. The induced-boundary flags are reported, not enforced.
    """
    d = structure.dim
    pspec = PartitionComplexSpec.subdivision(structure)
    reduced = ReducedPartitionComplex(pspec, theta, field, max_position=0)
    kernels = reduced.front_kernel_dims(d + 1)
    ok, failing = structure.boundary_induced_ok()
    return {
        "kernel_dims": kernels,
        "pass": not any(dim for j, dim in kernels.items() if j <= d // 2),
        "boundary_induced_ok": ok,
        "failing_cells": failing,
        "dim": d,
    }
