"""Buchberger's algorithm for submodules of graded free modules over F_p[x]/I.

Elements of a free module F = R(-d_0) + ... + R(-d_{r-1}) are handled in two
forms: the public form is a tuple of Polynomials (one per component), the
internal form ("fvec") is a flat term list [((pos, mono), coeff), ...] sorted
descending under position-over-term with e_0 largest and grevlex on monomials.

Quotient rings are handled by appending (ideal GB) x (each basis vector) to
every generating set and working in the ambient polynomial ring; results are
interpreted over R by the callers.

Syzygies are produced Schreyer-style: a representation-tracked basis
completion followed by an all-pairs S-pair division pass.  Pair-selection
criteria (Gebauer-Moeller) are used only during completion, never during the
syzygy pass, so syzygy generation does not depend on their correctness.
"""

from __future__ import annotations

import heapq

from . import errors
from .algebra import Polynomial, mono_deg, mono_div, mono_lcm, mono_mul


class FreeContext:
    """A graded free module: a ring plus generator degrees."""

    __slots__ = ("ring", "degrees", "rank")

    def __init__(self, ring, degrees):
        self.ring = ring
        self.degrees = tuple(degrees)
        self.rank = len(self.degrees)

    def term_key(self, pm):
        pos, m = pm
        return (-pos, self.ring.mono_key(m))

    def term_degree(self, pm):
        pos, m = pm
        return mono_deg(m, self.ring.weights) + self.degrees[pos]

    def zero_vec(self):
        return tuple(self.ring.zero() for _ in range(self.rank))

    def basis_vec(self, i, poly=None):
        out = [self.ring.zero()] * self.rank
        out[i] = self.ring.one() if poly is None else poly
        return tuple(out)


def to_fvec(ctx, vec):
    if len(vec) != ctx.rank:
        raise errors.ModuleMismatch(f"vector of length {len(vec)} in rank-{ctx.rank} module")
    terms = []
    for pos, poly in enumerate(vec):
        for m, c in poly.terms:
            terms.append(((pos, m), c))
    terms.sort(key=lambda t: ctx.term_key(t[0]), reverse=True)
    return terms


def from_fvec(ctx, fv):
    comps = [{} for _ in range(ctx.rank)]
    for (pos, m), c in fv:
        comps[pos][m] = c
    return tuple(ctx.ring.from_dict(d) for d in comps)


def fvec_degree(ctx, fv):
    """Common degree of a homogeneous fvec, or None; zero vector gives None."""
    if not fv:
        return None
    degs = {ctx.term_degree(pm) for pm, _ in fv}
    return degs.pop() if len(degs) == 1 else None


def vec_is_homogeneous(ctx, vec):
    fv = to_fvec(ctx, vec)
    return not fv or fvec_degree(ctx, fv) is not None


def f_scale(ctx, fv, c, q):
    """c * x^q * fv; multiplying by one monomial preserves term order."""
    p = ctx.ring.p
    return [((pos, mono_mul(m, q)), (c * cc) % p) for (pos, m), cc in fv]


def f_sub_scaled(ctx, a, c, q, b):
    """a - c * x^q * b, both sorted term lists; returns a new sorted list."""
    p = ctx.ring.p
    bs = f_scale(ctx, b, c, q)
    key = ctx.term_key
    out = []
    i = j = 0
    la, lb = len(a), len(bs)
    while i < la and j < lb:
        ka, kb = key(a[i][0]), key(bs[j][0])
        if ka > kb:
            out.append(a[i])
            i += 1
        elif ka < kb:
            out.append((bs[j][0], (-bs[j][1]) % p))
            j += 1
        else:
            v = (a[i][1] - bs[j][1]) % p
            if v:
                out.append((a[i][0], v))
            i += 1
            j += 1
    out.extend(a[i:])
    for t in bs[j:]:
        out.append((t[0], (-t[1]) % p))
    return out


class _Item:
    __slots__ = ("fv", "lead", "idx", "is_input", "single_pos", "u")

    def __init__(self, fv, idx, is_input, u=None):
        self.fv = fv
        self.lead = fv[0][0]
        self.idx = idx
        self.is_input = is_input
        self.single_pos = all(pm[0] == fv[0][0][0] for pm, _ in fv)
        self.u = u  # dict input_index -> {mono: coeff}, tracking over inputs


def _u_scale_add(p, acc, c, q, u):
    for l, poly in u.items():
        dst = acc.setdefault(l, {})
        for m, cc in poly.items():
            mm = mono_mul(m, q)
            v = (dst.get(mm, 0) + c * cc) % p
            if v:
                dst[mm] = v
            else:
                dst.pop(mm, None)
        if not dst:
            acc.pop(l, None)
    return acc


class ModuleGB:
    """Groebner basis of a submodule, optionally with input-representation tracking.

    The item list is append-only: inputs are kept verbatim (monic-scaled), so
    after :meth:`complete` the items form a basis that contains the inputs.
    """

    def __init__(self, ctx, include_ideal=True, track=False):
        self.ctx = ctx
        self.track = track
        self.items = []
        self.by_pos = {}
        self.pairs = []  # heap of (sdeg, j, i) with i < j
        self.n_inputs = 0
        self._ideal_added = False
        if include_ideal and ctx.ring.ideal:
            self._add_ideal_multiples()

    def _add_ideal_multiples(self):
        # ideal multiples count as inputs (their syzygy coordinates are
        # dropped by callers projecting to the user generators)
        ring = self.ctx.ring
        for i in range(self.ctx.rank):
            for g in ring.gb:
                self.add_generator(self.ctx.basis_vec(i, g))
        self._ideal_added = True

    @property
    def input_count(self):
        return self.n_inputs

    def add_generator(self, vec, check_homogeneous=True):
        """Schedule a homogeneous generator; returns its input slot or None if zero."""
        fv = to_fvec(self.ctx, vec) if isinstance(vec, tuple) else vec
        slot = self.n_inputs
        self.n_inputs += 1
        if not fv:
            return None
        if check_homogeneous and fvec_degree(self.ctx, fv) is None:
            raise errors.InhomogeneousGenerator("generator is not homogeneous")
        c = fv[0][1]
        if c != 1:
            inv = self.ctx.ring.field.inv(c)
            fv = [(pm, (inv * cc) % self.ctx.ring.p) for pm, cc in fv]
        u = {slot: {(0,) * self.ctx.ring.nvars: self.ctx.ring.field.inv(c)}} if self.track else None
        self._install(_Item(fv, len(self.items), True, u))
        return slot

    def _install(self, item):
        self._update_pairs(item)
        self.items.append(item)
        self.by_pos.setdefault(item.lead[0], []).append(item)

    def _update_pairs(self, new):
        """Gebauer-Moeller pair update restricted to the new item's lead position."""
        t = len(self.items)
        pos, lmt = new.lead
        # B criterion: drop pending pairs strictly dominated by the new lead
        if self.pairs:
            kept = []
            for sdeg, j, i in self.pairs:
                gi, gj = self.items[i], self.items[j]
                if gi.lead[0] == pos:
                    lij = mono_lcm(gi.lead[1], gj.lead[1])
                    if (
                        mono_div(lij, lmt) is not None
                        and mono_lcm(gi.lead[1], lmt) != lij
                        and mono_lcm(gj.lead[1], lmt) != lij
                    ):
                        continue
                kept.append((sdeg, j, i))
            if len(kept) != len(self.pairs):
                self.pairs = kept
                heapq.heapify(self.pairs)
        # new pairs (i, t), pruned by the M/F criteria
        cands = {}
        for it in self.by_pos.get(pos, ()):
            lcm = mono_lcm(it.lead[1], lmt)
            cands.setdefault(lcm, []).append(it.idx)
        minimal = []
        lcms = list(cands.keys())
        for lcm in lcms:
            if any(other != lcm and mono_div(lcm, other) is not None for other in lcms):
                continue
            minimal.append(lcm)
        for lcm in minimal:
            i = min(cands[lcm])
            gi = self.items[i]
            # product criterion: only valid when both elements live in one component
            if (
                gi.single_pos
                and new.single_pos
                and lcm == mono_mul(gi.lead[1], lmt)
            ):
                continue
            sdeg = mono_deg(lcm, self.ctx.ring.weights) + self.ctx.degrees[pos]
            heapq.heappush(self.pairs, (sdeg, t, i))

    def reduce(self, fv, track_quotients=False):
        """Fully reduce fv by the current items; returns (remainder, quotients).

        quotients is a dict item_index -> {mono: coeff} when requested.
        """
        p = self.ctx.ring.p
        work = list(fv)
        start = 0
        rem = []
        quots = {} if track_quotients else None
        while start < len(work):
            (pos, m), c = work[start]
            hit = None
            for it in self.by_pos.get(pos, ()):
                q = mono_div(m, it.lead[1])
                if q is not None:
                    hit = (q, it)
                    break
            if hit is None:
                rem.append(work[start])
                start += 1
                continue
            q, it = hit
            work = f_sub_scaled(self.ctx, work[start:], c, q, it.fv)
            start = 0
            if track_quotients:
                d = quots.setdefault(it.idx, {})
                v = (d.get(q, 0) + c) % p
                if v:
                    d[q] = v
                else:
                    d.pop(q, None)
        return rem, quots

    def complete(self):
        """Process all pending S-pairs, appending reduced remainders."""
        p = self.ctx.ring.p
        while self.pairs:
            _, j, i = heapq.heappop(self.pairs)
            gi, gj = self.items[i], self.items[j]
            lcm = mono_lcm(gi.lead[1], gj.lead[1])
            qi = mono_div(lcm, gi.lead[1])
            qj = mono_div(lcm, gj.lead[1])
            s = f_sub_scaled(self.ctx, f_scale(self.ctx, gi.fv, 1, qi), 1, qj, gj.fv)
            if not s:
                continue
            rem, quots = self.reduce(s, track_quotients=self.track)
            if not rem:
                continue
            c = rem[0][1]
            if c != 1:
                inv = self.ctx.ring.field.inv(c)
                rem = [(pm, (inv * cc) % p) for pm, cc in rem]
            u = None
            if self.track:
                acc = {}
                _u_scale_add(p, acc, 1, qi, gi.u)
                _u_scale_add(p, acc, p - 1, qj, gj.u)
                for t_idx, qd in quots.items():
                    ut = self.items[t_idx].u
                    for qm, qc in qd.items():
                        _u_scale_add(p, acc, (-qc) % p, qm, ut)
                if c != 1:
                    inv = self.ctx.ring.field.inv(c)
                    for l in list(acc):
                        acc[l] = {m: (inv * cc) % p for m, cc in acc[l].items()}
                u = acc
            self._install(_Item(rem, len(self.items), False, u))
        return self

    # -- queries --------------------------------------------------------------

    def normal_form(self, vec):
        rem, _ = self.reduce(to_fvec(self.ctx, vec))
        return from_fvec(self.ctx, rem)

    def contains(self, vec):
        rem, _ = self.reduce(to_fvec(self.ctx, vec))
        return not rem

    def lead_terms(self):
        return [it.lead for it in self.items]

    def express(self, vec):
        """Coordinates of vec over the original inputs, or None if not a member.

        Requires tracking.  Returns a list of Polynomials, one per input slot.
        """
        assert self.track, "express() needs a tracked basis"
        rem, quots = self.reduce(to_fvec(self.ctx, vec), track_quotients=True)
        if rem:
            return None
        p = self.ctx.ring.p
        acc = {}
        for t_idx, qd in quots.items():
            ut = self.items[t_idx].u
            for qm, qc in qd.items():
                _u_scale_add(p, acc, qc, qm, ut)
        return [
            self.ctx.ring.from_dict(acc.get(l, {}))
            for l in range(self.n_inputs)
        ]

    # -- syzygies ---------------------------------------------------------------

    def syzygies(self):
        """Generators of the syzygy module of the inputs (all coordinates).

        Runs the Schreyer all-pairs pass over the completed basis and maps the
        resulting relations back to input coordinates via the tracked
        representations.  Requires tracking and a completed basis.
        """
        assert self.track, "syzygies() need a tracked basis"
        assert not self.pairs, "complete() the basis before asking for syzygies"
        p = self.ctx.ring.p
        out = []
        for pos, items in self.by_pos.items():
            n = len(items)
            for a in range(n):
                for b in range(a + 1, n):
                    gi, gj = items[a], items[b]
                    lcm = mono_lcm(gi.lead[1], gj.lead[1])
                    qi = mono_div(lcm, gi.lead[1])
                    qj = mono_div(lcm, gj.lead[1])
                    s = f_sub_scaled(
                        self.ctx, f_scale(self.ctx, gi.fv, 1, qi), 1, qj, gj.fv
                    )
                    rem, quots = self.reduce(s, track_quotients=True)
                    if rem:
                        raise errors.AlgebraError(
                            "S-pair failed to reduce to zero over a completed basis"
                        )
                    acc = {}
                    _u_scale_add(p, acc, 1, qi, gi.u)
                    _u_scale_add(p, acc, p - 1, qj, gj.u)
                    for t_idx, qd in quots.items():
                        ut = self.items[t_idx].u
                        for qm, qc in qd.items():
                            _u_scale_add(p, acc, (-qc) % p, qm, ut)
                    if acc:
                        out.append(acc)
        return out


# ---------------------------------------------------------------------------
# Convenience entry points.


def module_gb(ctx, gens, include_ideal=True, check_homogeneous=True):
    """Completed (untracked) Groebner basis of the submodule generated by gens."""
    gb = ModuleGB(ctx, include_ideal=include_ideal, track=False)
    for v in gens:
        gb.add_generator(v, check_homogeneous=check_homogeneous)
    return gb.complete()


def normal_form(vec, gb):
    """Remainder of vec modulo a completed basis; zero iff vec is a member."""
    return gb.normal_form(vec)


def syzygy_vectors(ctx, gens, include_ideal=True):
    """Homogeneous generators of the syzygy module of ``gens`` over R.

    Returns vectors of length len(gens): coordinates on any appended ideal
    multiples are projected away (a relation holding modulo I F is an
    R-syzygy).  Zero generators contribute their unit syzygies directly.
    """
    ring = ctx.ring
    gb = ModuleGB(ctx, include_ideal=False, track=True)
    unit_syz = []
    slot_of = {}
    for j, v in enumerate(gens):
        slot = gb.add_generator(v)
        if slot is None:
            unit_syz.append(j)
        else:
            slot_of[slot] = j
    n_user_slots = gb.n_inputs
    if include_ideal and ring.ideal:
        gb._add_ideal_multiples()
    gb.complete()
    t = len(gens)
    out = []
    for j in unit_syz:
        coords = [ring.zero()] * t
        coords[j] = ring.one()
        out.append(tuple(coords))
    seen = set()
    for acc in gb.syzygies():
        coords = [ring.zero()] * t
        nonzero = False
        for slot, poly_dict in acc.items():
            if slot >= n_user_slots:
                continue  # coordinate on an ideal multiple
            f = ring.reduce(ring.from_dict(poly_dict))
            if not f.is_zero:
                coords[slot_of[slot]] = f
                nonzero = True
        if nonzero:
            key = tuple(f.terms for f in coords)
            if key not in seen:
                seen.add(key)
                out.append(tuple(coords))
    return out


def buchberger(gens, ring, degrees=None):
    """Spec-level entry: reduced-flavour GB of a submodule given by vectors.

    ``gens`` are tuples of Polynomials over ``ring``; the free-module
    generator degrees default to ``0`` everywhere (they do not affect the
    basis, only degree bookkeeping).
    """
    if not gens:
        raise ValueError("need at least one generator to infer the rank")
    rank = len(gens[0])
    ctx = FreeContext(ring, degrees if degrees is not None else (0,) * rank)
    for v in gens:
        if not vec_is_homogeneous(ctx, v):
            raise errors.InhomogeneousGenerator(f"generator {v} is not homogeneous")
    return module_gb(ctx, gens, include_ideal=True)


def reduced_ideal_gb(ring, gens):
    """The unique reduced Groebner basis of an ideal in the ambient ring."""
    ctx = FreeContext(ring, (0,))
    gb = ModuleGB(ctx, include_ideal=False, track=False)
    for g in gens:
        gb.add_generator((g,))
    gb.complete()
    # minimalize: drop elements whose lead is divisible by another lead
    items = sorted(gb.items, key=lambda it: ring.mono_key(it.lead[1]))
    keep = []
    for it in items:
        if not any(mono_div(it.lead[1], other.lead[1]) is not None for other in keep):
            keep.append(it)
    # interreduce tails
    polys = [from_fvec(ctx, it.fv)[0] for it in keep]
    changed = True
    while changed:
        changed = False
        for i in range(len(polys)):
            others = polys[:i] + polys[i + 1:]
            octx = FreeContext(ring, (0,))
            ogb = ModuleGB(octx, include_ideal=False, track=False)
            for f in others:
                ogb.add_generator((f,))
            # no completion: tail-reduce against the (already) basis elements
            rem, _ = ogb.reduce(to_fvec(octx, (polys[i],)))
            f = from_fvec(octx, rem)[0]
            if not f.is_zero:
                f = f.monic()
            if f != polys[i]:
                polys[i] = f
                changed = True
        polys = [f for f in polys if not f.is_zero]
    polys.sort(key=lambda f: ring.mono_key(f.lead_monomial()), reverse=True)
    return polys


def spair_criterion_check(gb):
    """Exhaustively verify every same-position S-pair reduces to zero."""
    ctx = gb.ctx
    for pos, items in gb.by_pos.items():
        n = len(items)
        for a in range(n):
            for b in range(a + 1, n):
                gi, gj = items[a], items[b]
                lcm = mono_lcm(gi.lead[1], gj.lead[1])
                qi = mono_div(lcm, gi.lead[1])
                qj = mono_div(lcm, gj.lead[1])
                s = f_sub_scaled(ctx, f_scale(ctx, gi.fv, 1, qi), 1, qj, gj.fv)
                rem, _ = gb.reduce(s)
                if rem:
                    return False
    return True
