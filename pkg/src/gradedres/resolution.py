"""Graded free modules, homogeneous matrices, presentations, and resolutions.

Degree conventions: a free module with generator degrees (d_0..d_{r-1}) is
R(-d_0) + ... + R(-d_{r-1}); entry (i, j) of a homogeneous matrix is zero or
homogeneous of degree source[j] - target[i]; the twist M(a) subtracts a from
every generator degree.  Matrix entries are kept in normal form modulo the
ring's defining ideal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import errors, groebner, modmat
from .algebra import Polynomial, mono_deg, mono_div


class FreeModule:
    """Graded free module given by its generator degrees."""

    __slots__ = ("ring", "degrees")

    def __init__(self, ring, degrees):
        self.ring = ring
        self.degrees = tuple(degrees)

    @property
    def rank(self):
        return len(self.degrees)

    def twist(self, a):
        return FreeModule(self.ring, tuple(d - a for d in self.degrees))

    def dual(self):
        return FreeModule(self.ring, tuple(-d for d in self.degrees))

    def context(self):
        return groebner.FreeContext(self.ring, self.degrees)

    def graded_dim(self, d):
        """F_p dimension of the degree-d piece over the quotient ring."""
        return sum(len(self.ring.standard_monomials(d - g)) for g in self.degrees)

    def graded_basis(self, d):
        """Pairs (position, monomial) forming a basis of the degree-d piece."""
        out = []
        for pos, g in enumerate(self.degrees):
            for m in self.ring.standard_monomials(d - g):
                out.append((pos, m))
        return out

    def __eq__(self, other):
        return (
            isinstance(other, FreeModule)
            and self.degrees == other.degrees
            and self.ring == other.ring
        )

    def __hash__(self):
        return hash(self.degrees)

    def __repr__(self):
        if not self.degrees:
            return "0"
        return " + ".join(f"R({-d})" if d else "R" for d in self.degrees)


class GradedMatrix:
    """Homogeneous map source -> target between graded free modules."""

    __slots__ = ("ring", "target", "source", "entries")

    def __init__(self, ring, target, source, entries, reduce=True, check=True):
        self.ring = ring
        self.target = target
        self.source = source
        rows = []
        for i in range(target.rank):
            row = []
            for j in range(source.rank):
                e = entries[i][j]
                if reduce and ring.ideal:
                    e = ring.reduce(e)
                row.append(e)
            rows.append(tuple(row))
        self.entries = tuple(rows)
        if check:
            self._validate()

    def _validate(self):
        for i in range(self.target.rank):
            for j in range(self.source.rank):
                e = self.entries[i][j]
                if e.is_zero:
                    continue
                d = e.degree()
                want = self.source.degrees[j] - self.target.degrees[i]
                if d is None or d != want:
                    raise errors.InhomogeneousMatrix(
                        f"entry ({i},{j}) = {e} has degree {d}, expected {want}"
                    )

    # -- constructors ---------------------------------------------------------

    @staticmethod
    def zero(ring, target, source):
        z = ring.zero()
        return GradedMatrix(
            ring, target, source,
            [[z] * source.rank for _ in range(target.rank)], reduce=False, check=False,
        )

    @staticmethod
    def identity(ring, module):
        one = ring.one()
        z = ring.zero()
        ents = [[one if i == j else z for j in range(module.rank)] for i in range(module.rank)]
        return GradedMatrix(ring, module, module, ents, reduce=False, check=False)

    @staticmethod
    def from_columns(ring, target, cols, source_degrees=None):
        """Build a matrix whose j-th column is the vector cols[j] in ``target``."""
        ctx = target.context()
        if source_degrees is None:
            source_degrees = []
            for v in cols:
                fv = groebner.to_fvec(ctx, v)
                d = groebner.fvec_degree(ctx, fv)
                if d is None:
                    raise errors.InhomogeneousMatrix(f"column {v} is not homogeneous")
                source_degrees.append(d)
        ents = [
            [cols[j][i] for j in range(len(cols))] for i in range(target.rank)
        ]
        return GradedMatrix(ring, target, FreeModule(ring, source_degrees), ents)

    # -- views ----------------------------------------------------------------

    def columns(self):
        return [
            tuple(self.entries[i][j] for i in range(self.target.rank))
            for j in range(self.source.rank)
        ]

    def entry(self, i, j):
        return self.entries[i][j]

    @property
    def is_zero(self):
        return all(e.is_zero for row in self.entries for e in row)

    def has_unit_entry(self):
        return self.find_unit_entry() is not None

    def find_unit_entry(self):
        for i, row in enumerate(self.entries):
            for j, e in enumerate(row):
                c = e.constant_value()
                if c:
                    return i, j
        return None

    def is_minimal(self):
        """Graded Nakayama: no nonzero scalar entries."""
        return self.find_unit_entry() is None

    # -- algebra ----------------------------------------------------------------

    def compose(self, other):
        """self o other; other maps into self.source."""
        if other.target != self.source:
            raise errors.ModuleMismatch("matrix composition shape mismatch")
        ring = self.ring
        ents = []
        for i in range(self.target.rank):
            row = []
            for j in range(other.source.rank):
                acc = ring.zero()
                for k in range(self.source.rank):
                    a = self.entries[i][k]
                    b = other.entries[k][j]
                    if not a.is_zero and not b.is_zero:
                        acc = acc + a * b
                row.append(acc)
            ents.append(row)
        return GradedMatrix(ring, self.target, other.source, ents)

    def dual(self):
        """Transpose with negated degrees: Hom(-, R) on a map of free modules."""
        ents = [
            [self.entries[i][j] for i in range(self.target.rank)]
            for j in range(self.source.rank)
        ]
        return GradedMatrix(self.ring, self.source.dual(), self.target.dual(), ents, reduce=False)

    def twist(self, a):
        return GradedMatrix(
            self.ring, self.target.twist(a), self.source.twist(a), self.entries, reduce=False
        )

    def apply(self, vec):
        """Image of a source vector as a target vector."""
        out = []
        for i in range(self.target.rank):
            acc = self.ring.zero()
            for j in range(self.source.rank):
                e = self.entries[i][j]
                if not e.is_zero and not vec[j].is_zero:
                    acc = acc + e * vec[j]
            out.append(self.ring.reduce(acc))
        return tuple(out)

    def __eq__(self, other):
        return (
            isinstance(other, GradedMatrix)
            and self.target == other.target
            and self.source == other.source
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.target.degrees, self.source.degrees))

    def to_strings(self):
        return [[str(e) for e in row] for row in self.entries]

    def __repr__(self):
        if not self.entries:
            return f"<0x{self.source.rank} matrix>"
        body = "; ".join(", ".join(str(e) for e in row) for row in self.entries)
        return f"[{body}]"


# ---------------------------------------------------------------------------
# Presentations.


class ModulePresentation:
    """A graded module M = coker(matrix: F_1 -> F_0)."""

    __slots__ = ("ring", "matrix", "minimal", "_gb", "_minimal_form", "_res", "_pd", "gdim_certificate")

    def __init__(self, ring, matrix, minimal=False):
        self.ring = ring
        self.matrix = matrix
        self.minimal = minimal
        self._gb = None
        self._minimal_form = None
        self._res = None
        self._pd = None
        self.gdim_certificate = None

    # -- basic views ------------------------------------------------------------

    @property
    def f0(self):
        return self.matrix.target

    def gens_degrees(self):
        return self.matrix.target.degrees

    def column_gb(self):
        """Completed GB of (presentation columns + I*F_0) in F_0."""
        if self._gb is None:
            ctx = self.f0.context()
            self._gb = groebner.module_gb(ctx, self.matrix.columns(), include_ideal=True)
        return self._gb

    def graded_dim(self, d):
        """dim_k M_d via standard monomials of the column GB."""
        gb = self.column_gb()
        leads = {}
        for it in gb.items:
            leads.setdefault(it.lead[0], []).append(it.lead[1])
        total = 0
        for pos, g in enumerate(self.f0.degrees):
            lms = leads.get(pos, ())
            for m in self.ring.monomials_of_degree(d - g):
                if not any(mono_div(m, lm) is not None for lm in lms):
                    total += 1
        return total

    def hilbert_range(self, lo, hi):
        return [self.graded_dim(d) for d in range(lo, hi + 1)]

    def min_gen_degree(self):
        m = self.minimize()
        return min(m.f0.degrees) if m.f0.degrees else None

    @property
    def is_zero(self):
        return self.minimize().f0.rank == 0

    def mu(self):
        """Minimal number of generators."""
        return self.minimize().f0.rank

    # -- normalization ------------------------------------------------------------

    def minimize(self):
        """A minimal presentation of the same module (cached)."""
        if self.minimal:
            return self
        if self._minimal_form is None:
            self._minimal_form = _minimize_presentation(self)
        return self._minimal_form

    def twist(self, a):
        out = ModulePresentation(self.ring, self.matrix.twist(a), minimal=self.minimal)
        out.gdim_certificate = self.gdim_certificate
        return out

    def __repr__(self):
        return f"coker{self.matrix!r} over {self.ring!r}"


def free_presentation(ring, degrees):
    f0 = FreeModule(ring, degrees)
    return ModulePresentation(
        ring, GradedMatrix.zero(ring, f0, FreeModule(ring, ())), minimal=True
    )


def zero_module(ring):
    return free_presentation(ring, ())


def residue_field(ring):
    """k = R/m as a cyclic module."""
    f0 = FreeModule(ring, (0,))
    cols = [(v,) for v in ring.gens()]
    return ModulePresentation(ring, GradedMatrix.from_columns(ring, f0, cols), minimal=True)


def cyclic_quotient(ring, gens):
    """R/(gens) presented on one generator in degree 0."""
    f0 = FreeModule(ring, (0,))
    cols = [(ring.coerce(g),) for g in gens]
    cols = [c for c in cols if not c[0].is_zero]
    pres = GradedMatrix.from_columns(ring, f0, cols)
    return ModulePresentation(ring, pres).minimize()


def minimal_generators(vectors, module, base=(), ring=None):
    """Select a minimal homogeneous generating subset, ascending by degree.

    ``module`` is the ambient FreeModule; ``base`` vectors are treated as
    already present (the selection is modulo the submodule they generate plus
    I*F).  Returns the accepted vectors in selection order.
    """
    ctx = module.context()
    ring = ring or module.ring
    items = []
    for v in vectors:
        fv = groebner.to_fvec(ctx, v)
        if not fv:
            continue
        d = groebner.fvec_degree(ctx, fv)
        if d is None:
            raise errors.InhomogeneousGenerator(f"vector {v} is not homogeneous")
        items.append((d, len(items), v))
    items.sort(key=lambda t: (t[0], t[1]))
    gb = groebner.ModuleGB(ctx, include_ideal=True, track=False)
    for b in base:
        gb.add_generator(b)
    gb.complete()
    accepted = []
    for _, _, v in items:
        rem, _ = gb.reduce(groebner.to_fvec(ctx, v))
        if rem:
            accepted.append(v)
            gb.add_generator(v)
            gb.complete()
    return accepted


def syzygy_matrix(a):
    """Matrix whose columns minimally generate ker(a) over the quotient ring."""
    ctx = a.target.context()
    cols = a.columns()
    syz = groebner.syzygy_vectors(ctx, cols, include_ideal=True)
    src = a.source
    kept = minimal_generators(syz, src)
    return GradedMatrix.from_columns(a.ring, src, kept)


def _minimize_presentation(m):
    """Iterate unit-entry pivoting and redundant-column pruning to a fixpoint."""
    ring = m.ring
    mat = m.matrix
    while True:
        # prune columns that are consequences of the others (graded Nakayama)
        cols = [c for c in mat.columns() if any(not e.is_zero for e in c)]
        kept = minimal_generators(cols, mat.target)
        mat = GradedMatrix.from_columns(ring, mat.target, kept)
        pos = mat.find_unit_entry()
        if pos is None:
            break
        mat = _pivot_delete(mat, *pos)
    return ModulePresentation(ring, mat, minimal=True)


def _pivot_delete(mat, i, j):
    """Remove a unit entry at (i, j) by row/column operations, then delete both."""
    ring = mat.ring
    u = mat.entries[i][j].constant_value()
    uinv = ring.field.inv(u)
    t_idx = [r for r in range(mat.target.rank) if r != i]
    s_idx = [c for c in range(mat.source.rank) if c != j]
    ents = []
    for r in t_idx:
        row = []
        for c in s_idx:
            e = mat.entries[r][c] - mat.entries[r][j] * uinv * mat.entries[i][c]
            row.append(e)
        ents.append(row)
    return GradedMatrix(
        ring,
        FreeModule(ring, [mat.target.degrees[r] for r in t_idx]),
        FreeModule(ring, [mat.source.degrees[c] for c in s_idx]),
        ents,
    )


def presentation_of_submodule(vectors, m):
    """Presentation of the submodule of M generated by the given F_0 vectors."""
    ring = m.ring
    mm = m.minimize()
    pres_cols = mm.matrix.columns()
    gens = minimal_generators(vectors, mm.f0, base=pres_cols)
    if not gens:
        return zero_module(ring)
    ctx = mm.f0.context()
    all_cols = list(gens) + pres_cols
    syz = groebner.syzygy_vectors(ctx, all_cols, include_ideal=True)
    rel = [tuple(s[: len(gens)]) for s in syz]
    rel = [r for r in rel if any(not e.is_zero for e in r)]
    gen_degs = []
    for v in gens:
        fv = groebner.to_fvec(ctx, v)
        gen_degs.append(groebner.fvec_degree(ctx, fv))
    target = FreeModule(ring, gen_degs)
    rel_kept = minimal_generators(rel, target)
    pres = GradedMatrix.from_columns(ring, target, rel_kept)
    return ModulePresentation(ring, pres).minimize()


def minimal_presentation(gens, ring, mode="submodule", ambient_degrees=None):
    """Spec-level constructor: module from generators in a graded free module.

    mode="submodule": the module they generate; mode="quotient": the ambient
    free module modulo the submodule they generate.
    """
    if not gens:
        raise ValueError("no generators given")
    rank = len(gens[0])
    amb = FreeModule(ring, ambient_degrees if ambient_degrees is not None else (0,) * rank)
    ctx = amb.context()
    for v in gens:
        if not groebner.vec_is_homogeneous(ctx, v):
            raise errors.InhomogeneousGenerator(f"generator {v} is not homogeneous")
    if mode == "quotient":
        cols = [v for v in gens if any(not e.is_zero for e in v)]
        pres = GradedMatrix.from_columns(ring, amb, cols)
        return ModulePresentation(ring, pres).minimize()
    if mode == "submodule":
        free = free_presentation(ring, amb.degrees)
        return presentation_of_submodule(list(gens), free)
    raise ValueError(f"unknown mode {mode!r}")


def quotient_module(m, ideal_elems):
    """M/JM for a list of homogeneous ring elements J."""
    ring = m.ring
    mm = m.minimize()
    elems = [ring.coerce(f) for f in ideal_elems]
    for f in elems:
        if not f.is_zero and f.degree() is None:
            raise errors.InhomogeneousElement(f"{f} is not homogeneous")
    cols = mm.matrix.columns()
    ctx = mm.f0.context()
    for f in elems:
        if f.is_zero:
            continue
        for i in range(mm.f0.rank):
            cols.append(ctx.basis_vec(i, f))
    pres = GradedMatrix.from_columns(ring, mm.f0, cols)
    return ModulePresentation(ring, pres).minimize()


def direct_sum(m, n):
    if m.ring != n.ring:
        raise errors.RingMismatch("direct sum over different rings")
    ring = m.ring
    a, b = m.minimize().matrix, n.minimize().matrix
    target = FreeModule(ring, a.target.degrees + b.target.degrees)
    source = FreeModule(ring, a.source.degrees + b.source.degrees)
    z = ring.zero()
    ents = []
    for i in range(a.target.rank):
        ents.append(list(a.entries[i]) + [z] * b.source.rank)
    for i in range(b.target.rank):
        ents.append([z] * a.source.rank + list(b.entries[i]))
    return ModulePresentation(ring, GradedMatrix(ring, target, source, ents), minimal=True)


def min_generators(m):
    return m.mu()


def kernel_of_scalar(x, m):
    """(0 :_M x) = {v in M : x v = 0} as a presented module."""
    ring = m.ring
    x = ring.coerce(x)
    if not x.is_zero and x.degree() is None:
        raise errors.InhomogeneousElement(f"{x} is not homogeneous")
    mm = m.minimize()
    if mm.f0.rank == 0:
        return zero_module(ring)
    ctx = mm.f0.context()
    cols = [ctx.basis_vec(i, x) for i in range(mm.f0.rank)] + mm.matrix.columns()
    syz = groebner.syzygy_vectors(ctx, cols, include_ideal=True)
    rank = mm.f0.rank
    candidates = [tuple(s[:rank]) for s in syz]
    candidates = [c for c in candidates if any(not e.is_zero for e in c)]
    return presentation_of_submodule(candidates, mm)


# ---------------------------------------------------------------------------
# Complexes.


class FreeComplex:
    """A finite chain of graded matrices F_r -> ... -> F_1 -> F_0 with d o d = 0."""

    __slots__ = ("ring", "f0", "diffs")

    def __init__(self, ring, f0, diffs, check=True):
        self.ring = ring
        self.f0 = f0
        self.diffs = tuple(diffs)
        if check:
            prev = f0
            for d in self.diffs:
                if d.target != prev:
                    raise errors.NotAComplex("differentials do not chain")
                prev = d.source

    @property
    def length(self):
        return len(self.diffs)

    def module(self, i):
        if i == 0:
            return self.f0
        return self.diffs[i - 1].source

    def modules(self):
        return [self.module(i) for i in range(self.length + 1)]

    def differential(self, i):
        """d_i: F_i -> F_{i-1}; the zero map for i > length."""
        if 1 <= i <= self.length:
            return self.diffs[i - 1]
        if i == self.length + 1:
            return GradedMatrix.zero(self.ring, self.module(self.length), FreeModule(self.ring, ()))
        raise IndexError(i)

    def is_complex(self):
        for i in range(len(self.diffs) - 1):
            if not self.diffs[i].compose(self.diffs[i + 1]).is_zero:
                return False
        return True

    def is_minimal(self):
        return all(d.is_minimal() for d in self.diffs)

    def twist(self, a):
        return FreeComplex(self.ring, self.f0.twist(a), [d.twist(a) for d in self.diffs], check=False)

    def __repr__(self):
        ranks = "<-".join(str(m.rank) for m in self.modules())
        return f"FreeComplex({ranks})"


@dataclass
class PdReport:
    """Outcome of projective-dimension detection."""

    finite: bool
    value: int | None = None
    cap: int | None = None

    @staticmethod
    def finite_pd(n):
        return PdReport(True, value=n)

    @staticmethod
    def exceeds(cap):
        return PdReport(False, cap=cap)

    def to_dict(self):
        if self.finite:
            return {"outcome": "finite", "pd": self.value}
        return {"outcome": "exceeds_cap", "cap": self.cap}


class BettiTable:
    """Ranks of minimal-resolution generators indexed by (homological i, degree j)."""

    def __init__(self, entries):
        self.entries = dict(entries)

    @staticmethod
    def of_complex(c):
        entries = {}
        for i, mod in enumerate(c.modules()):
            for d in mod.degrees:
                entries[(i, d)] = entries.get((i, d), 0) + 1
        return BettiTable(entries)

    def column_ranks(self):
        out = {}
        for (i, _), r in self.entries.items():
            out[i] = out.get(i, 0) + r
        return [out.get(i, 0) for i in range(max(out, default=-1) + 1)]

    def to_json(self):
        return [
            {"i": i, "j": j, "rank": r}
            for (i, j), r in sorted(self.entries.items())
        ]

    def to_text(self):
        """Macaulay2-style grid: row index j-i, column index i."""
        if not self.entries:
            return "(zero module)"
        cols = sorted({i for i, _ in self.entries})
        rows = sorted({j - i for i, j in self.entries})
        width = max(6, *(len(str(r)) for r in self.entries.values()))
        head = "      " + "".join(f"{i:>{width}}" for i in range(cols[-1] + 1))
        lines = [head]
        for rr in rows:
            cells = []
            for i in range(cols[-1] + 1):
                r = self.entries.get((i, i + rr))
                cells.append(f"{r if r else '.':>{width}}")
            lines.append(f"{rr:>5}:" + "".join(cells))
        return "\n".join(lines)

    def __eq__(self, other):
        return isinstance(other, BettiTable) and self.entries == other.entries


def betti(c):
    return BettiTable.of_complex(c)


def resolve(m, length_cap):
    """Minimal graded free resolution of M up to ``length_cap`` differentials.

    Returns (FreeComplex, PdReport).  The resolution is cached on the
    presentation and extended on demand by later calls.
    """
    if length_cap < 1:
        raise ValueError("length_cap must be >= 1")
    mm = m.minimize()
    if mm._res is None:
        mm._res = [mm.matrix] if mm.matrix.source.rank else []
        if not mm._res:
            mm._pd = 0 if mm.f0.rank else -1
    while mm._pd is None and len(mm._res) < length_cap + 1:
        last = mm._res[-1]
        syz = syzygy_matrix(last)
        if syz.source.rank == 0:
            mm._pd = len(mm._res)
            break
        mm._res.append(syz)
    diffs = mm._res[: length_cap if mm._pd is None else min(length_cap, len(mm._res))]
    complex_ = FreeComplex(mm.ring, mm.f0, diffs, check=False)
    if mm._pd is not None and mm._pd <= length_cap:
        report = PdReport.finite_pd(max(mm._pd, 0))
    else:
        report = PdReport.exceeds(length_cap)
    return complex_, report


def projective_dimension(m, bound=None):
    """pd(M) as a PdReport; finiteness is decidable within depth(ambient) steps."""
    cap = bound if bound is not None else m.ring.nvars + 1
    _, report = resolve(m, cap)
    return report


def syzygy_module(m, n):
    """The n-th syzygy: coker of the (n+1)-st differential of the minimal resolution."""
    if n < 0:
        raise ValueError("syzygy index must be >= 0")
    mm = m.minimize()
    if n == 0:
        return mm
    c, report = resolve(mm, n + 1)
    if report.finite and report.value < n:
        return zero_module(m.ring)
    if report.finite and report.value == n:
        # omega^n = coker(0 -> F_n) = F_n, a free module
        return free_presentation(m.ring, c.module(n).degrees)
    pres = c.differential(n + 1)
    return ModulePresentation(m.ring, pres, minimal=True)


def minimalize(c):
    """Strip split exact summands: pivot away degree-zero unit entries."""
    if not c.is_complex():
        raise errors.NotAComplex("d o d != 0")
    ring = c.ring
    degs = [list(mod.degrees) for mod in c.modules()]
    mats = [[list(row) for row in d.entries] for d in c.diffs]

    def find_unit():
        for t, mat in enumerate(mats):
            for i, row in enumerate(mat):
                for j, e in enumerate(row):
                    cval = e.constant_value()
                    if cval:
                        return t, i, j, cval
        return None

    while True:
        hit = find_unit()
        if hit is None:
            break
        t, i, j, u = hit
        uinv = ring.field.inv(u)
        mat = mats[t]
        nrows, ncols = len(degs[t]), len(degs[t + 1])
        new = []
        for r in range(nrows):
            if r == i:
                continue
            row = []
            for s in range(ncols):
                if s == j:
                    continue
                row.append(ring.reduce(mat[r][s] - mat[r][j] * uinv * mat[i][s]))
            new.append(row)
        mats[t] = new
        if t > 0:
            mats[t - 1] = [[e for s, e in enumerate(row) if s != i] for row in mats[t - 1]]
        if t + 1 < len(mats):
            mats[t + 1] = [row for r, row in enumerate(mats[t + 1]) if r != j]
        del degs[t][i]
        del degs[t + 1][j]

    # drop trailing zero levels
    while degs and not degs[-1]:
        degs.pop()
        if mats:
            mats.pop()
    if not degs:
        return FreeComplex(ring, FreeModule(ring, ()), [], check=False)
    modules = [FreeModule(ring, d) for d in degs]
    diffs = [
        GradedMatrix(ring, modules[t], modules[t + 1], mats[t])
        for t in range(len(mats))
    ]
    return FreeComplex(ring, modules[0], diffs, check=False)


def koszul_complex(elements, ring):
    """Koszul complex on homogeneous ring elements with the standard signs.

    d(e_{i1..ik}) = sum_j (-1)^{j+1} x_{ij} e_{..omit j..}.
    """
    fs = [ring.coerce(f) for f in elements]
    degs = []
    for f in fs:
        if f.is_zero or f.degree() is None:
            raise errors.InhomogeneousElement(f"{f} is not a nonzero homogeneous element")
        degs.append(f.degree())
    n = len(fs)
    subsets = [list(itertools.combinations(range(n), k)) for k in range(n + 1)]
    modules = [
        FreeModule(ring, [sum(degs[i] for i in s) for s in subsets[k]])
        for k in range(n + 1)
    ]
    diffs = []
    z = ring.zero()
    for k in range(1, n + 1):
        index = {s: c for c, s in enumerate(subsets[k - 1])}
        ents = [[z] * len(subsets[k]) for _ in range(len(subsets[k - 1]))]
        for col, s in enumerate(subsets[k]):
            for pos, i in enumerate(s):
                rest = s[:pos] + s[pos + 1:]
                sign = 1 if pos % 2 == 0 else -1
                ents[index[rest]][col] = fs[i] * sign
        diffs.append(GradedMatrix(ring, modules[k - 1], modules[k], ents))
    return FreeComplex(ring, modules[0], diffs)


def presentation_of_homology(a_out, b_in):
    """ker(a_out)/im(b_in) for composable maps b_in: F' -> F, a_out: F -> F''."""
    ring = a_out.ring
    ker = syzygy_matrix(a_out)
    if ker.source.rank == 0:
        return zero_module(ring)
    ctx = a_out.source.context()
    cols = ker.columns() + b_in.columns()
    syz = groebner.syzygy_vectors(ctx, cols, include_ideal=True)
    k = ker.source.rank
    rel = [tuple(s[:k]) for s in syz]
    rel = [r for r in rel if any(not e.is_zero for e in r)]
    target = FreeModule(ring, ker.source.degrees)
    rel_kept = minimal_generators(rel, target)
    pres = GradedMatrix.from_columns(ring, target, rel_kept)
    return ModulePresentation(ring, pres).minimize()


def homology(c, i):
    """H_i of a finite free complex as a presented module."""
    if not 0 <= i <= c.length:
        raise IndexError(i)
    if not c.is_complex():
        raise errors.NotAComplex("d o d != 0")
    if i == 0:
        d1 = c.differential(1)
        return ModulePresentation(c.ring, d1).minimize()
    return presentation_of_homology(c.differential(i), c.differential(i + 1))


# ---------------------------------------------------------------------------
# Hilbert functions.


def hilbert_function(m, upto):
    """[dim_k M_d for d = 0..upto] via GB standard monomials."""
    if upto < 0:
        raise ValueError("upto must be >= 0")
    return m.hilbert_range(0, upto)


def hilbert_function_oracle(m, upto):
    """Same values by brute-force linear algebra; the test-mode cross-check."""
    ring = m.ring
    p = ring.p
    f0 = m.f0
    cols = [tuple(ring.reduce(e) for e in col) for col in m.matrix.columns()]
    ctx = f0.context()
    out = []
    for d in range(upto + 1):
        basis = f0.graded_basis(d)
        if not basis:
            out.append(0)
            continue
        index = {pm: i for i, pm in enumerate(basis)}
        rows = []
        for j, col in enumerate(cols):
            cdeg = m.matrix.source.degrees[j]
            for mult in ring.standard_monomials(d - cdeg):
                vec = [0] * len(basis)
                ok = True
                for pos, e in enumerate(col):
                    prod = ring.reduce(ring.monomial(mult) * e)
                    for mono, coeff in prod.terms:
                        key = (pos, mono)
                        if key not in index:
                            ok = False
                            break
                        vec[index[key]] = coeff
                    if not ok:
                        break
                if ok:
                    rows.append(vec)
        dim_sub = modmat.rank(modmat.asmat(rows, p), p) if rows else 0
        out.append(len(basis) - dim_sub)
    return out


def hilbert_from_betti(table, ring, upto):
    """Expand sum_i (-1)^i sum_j t^j b_{ij} / prod(1 - t^w) to degree ``upto``."""
    num = {}
    for (i, j), r in table.entries.items():
        num[j] = num.get(j, 0) + ((-1) ** i) * r
    series = [0] * (upto + 1)
    for j, cval in num.items():
        if 0 <= j <= upto:
            series[j] += cval
    for w in ring.weights:
        # multiply by 1/(1 - t^w) = 1 + t^w + t^{2w} + ...
        for d in range(w, upto + 1):
            series[d] += series[d - w]
    return series


def matrices_column_equivalent(a, b):
    """Whether two matrices into free modules of equal rank generate the same
    column module over R (degree labels ignored)."""
    if a.target.rank != b.target.rank:
        return False
    ring = a.ring
    free = FreeModule(ring, (0,) * a.target.rank)
    ctx = free.context()
    def recol(mat):
        return [tuple(ring.reduce(e) for e in col) for col in mat.columns()]
    ga = groebner.module_gb(ctx, recol(a), include_ideal=True, check_homogeneous=False)
    gbb = groebner.module_gb(ctx, recol(b), include_ideal=True, check_homogeneous=False)
    return all(ga.contains(c) for c in recol(b)) and all(gbb.contains(c) for c in recol(a))
