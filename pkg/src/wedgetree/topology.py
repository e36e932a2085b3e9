"""Coarse and countably coarse wedge topologies over described trees.

Two topologies share the cone subbase {V_t, T \\ V_t}: the coarse wedge
topology takes it at finite-cofinality points, the countably coarse wedge
topology at all points of cofinality != omega.  Membership, subbasic tests,
convergence verdicts and the witness constructions all run symbolically over
set/sequence templates with one linear parameter.

Deciders are sound and conservative: they raise UndecidableTailPattern when a
tail falls outside the decidable fragment, and never return a wrong verdict.
Choice functions pick least indices and least parameters so witnesses are
reproducible.
"""

from __future__ import annotations

import enum
import functools
from dataclasses import dataclass

from .errors import (
    ChoiceUnavailable, IllegalWedge, InvalidAddress, NotAccumulating,
    NotInClosure, PreconditionFailed, SupNotRepresentable,
    UndecidableTailPattern,
)
from .ordinals import (
    OMEGA, ONE, ZERO, Cofinality, Ordinal, add, cmp, left_sub,
    limit_of_affine, nat, pred, times_nat,
)
from .trees import (
    Below, Child, Copy, Node, Up, Word, ancestor_at, child_toward, children,
    cofinal_I_nodes, height, leq, leq_parts, meet, meet_parts, node_at,
    resolve, unc_sites,
)


class Topology(enum.Enum):
    CW = "cw"
    SIGMA_CW = "sigma-cw"


class Verdict(enum.Enum):
    CONVERGES = "converges"
    CLUSTERS_ONLY = "clusters-only"
    NEITHER = "neither"


def _as_node(d, x):
    return x if isinstance(x, Node) else resolve(d, x)


# -- basic opens ---------------------------------------------------------------

@dataclass(frozen=True)
class Cone:
    t: tuple


@dataclass(frozen=True)
class Wedge:
    t: tuple
    excluded: tuple = ()


@dataclass(frozen=True)
class ConeComplement:
    t: tuple


@dataclass(frozen=True)
class CDiff:
    """V_t minus finitely many cones above t (not necessarily immediate)."""
    t: tuple
    excluded: tuple = ()


def _check_wedge_legal(d, base, excluded):
    """Exclusions must be immediate successors of a single node >= base."""
    if not excluded:
        return
    nodes = [_as_node(d, f) for f in excluded]
    h = nodes[0].ht
    if any(cmp(n.ht, h) != 0 for n in nodes):
        raise IllegalWedge("exclusions sit at different levels")
    if len({n.parts for n in nodes}) != len(nodes):
        raise IllegalWedge("repeated exclusion")
    if h.kind() != "successor":
        raise IllegalWedge("immediate successors live at successor heights")
    parent = ancestor_at(d, nodes[0], pred(h))
    for n in nodes[1:]:
        if ancestor_at(d, n, pred(h)).parts != parent.parts:
            raise IllegalWedge("exclusions have different parents")
    if not leq_parts(_as_node(d, base).parts, parent.parts):
        raise IllegalWedge("exclusions do not sit above the wedge base")


def member(d, x, U):
    """Is x in the basic open U?"""
    x = _as_node(d, x)
    if isinstance(U, Cone):
        return leq(d, _as_node(d, U.t), x)
    if isinstance(U, ConeComplement):
        return not leq(d, _as_node(d, U.t), x)
    if isinstance(U, Wedge):
        base = _as_node(d, U.t)
        _check_wedge_legal(d, base, U.excluded)
        if not leq(d, base, x):
            return False
        return all(not leq(d, _as_node(d, f), x) for f in U.excluded)
    if isinstance(U, CDiff):
        base = _as_node(d, U.t)
        if not leq(d, base, x):
            return False
        return all(not leq(d, _as_node(d, f), x) for f in U.excluded)
    raise TypeError("not a basic open: %r" % (U,))


def is_subbasic(d, t, topology):
    """May V_t (and its complement) be taken as subbasic in this topology?"""
    t = _as_node(d, t)
    if topology is Topology.CW:
        return t.cof is Cofinality.ZERO
    return t.cof is not Cofinality.OMEGA


# -- parameterized templates -----------------------------------------------------

@dataclass(frozen=True)
class Param:
    """Linear parameter slot: value(p) = base + scale*p (+ merged tails)."""
    base: Ordinal = ZERO
    scale: Ordinal = ONE

    def at(self, p):
        if isinstance(p, Ordinal):
            if self.scale != ONE:
                raise UndecidableTailPattern(
                    "ordinal parameters support unit scale only")
            return add(self.base, p)
        return add(self.base, times_nat(self.scale, p))


def instantiate(template, p):
    steps = []
    for s in template:
        if isinstance(s, Word) and isinstance(s.count, Param):
            steps.append(Word(s.letters, s.count.at(p)))
        elif isinstance(s, Up) and isinstance(s.delta, Param):
            steps.append(Up(s.delta.at(p)))
        elif isinstance(s, Copy) and isinstance(s.idx, Param):
            steps.append(Copy(s.slot, s.idx.at(p).to_int()))
        elif isinstance(s, Child) and isinstance(s.i, Param):
            steps.append(Child(s.i.at(p).to_int()))
        else:
            steps.append(s)
    return tuple(steps)


def has_param(template):
    for s in template:
        if isinstance(s, (Word, Up, Copy, Child)):
            slot = getattr(s, "count", None) or getattr(s, "delta", None) or \
                getattr(s, "idx", None) or getattr(s, "i", None)
            if isinstance(slot, Param):
                return True
    return False


# -- set and sequence specs -------------------------------------------------------

@dataclass(frozen=True)
class Explicit:
    points: tuple


@dataclass(frozen=True)
class OmegaFamily:
    """{ template(n) : n < omega }."""
    template: tuple


@dataclass(frozen=True)
class ClubFamily:
    """{ template(alpha) : alpha < ht(anchor) }, ordinal-parameterized."""
    anchor: tuple
    template: tuple


@dataclass(frozen=True)
class Branch:
    """All predecessors of top, top included (a branch closure)."""
    top: tuple


@dataclass(frozen=True)
class ConeSet:
    """V_t as a point set."""
    t: tuple


@dataclass(frozen=True)
class UnionSpec:
    parts: tuple


@dataclass(frozen=True)
class Indexed:
    template: tuple


@dataclass(frozen=True)
class EventuallyConstant:
    point: tuple


@dataclass(frozen=True)
class SeqSpec:
    head: tuple = ()
    tail: object = None

    def term_steps(self, n):
        if n < len(self.head):
            return self.head[n]
        if isinstance(self.tail, Indexed):
            return instantiate(self.tail.template, n)
        if isinstance(self.tail, EventuallyConstant):
            return self.tail.point
        raise ValueError("sequence has no tail template")

    def term(self, d, n):
        return resolve(d, self.term_steps(n))


# -- fitting a series from probes --------------------------------------------------
#
# A template is turned into a SymbolicSeries by resolving it at probe
# parameters and unifying the canonical parts: exactly one slot (a run count,
# a copy index, a child letter) may vary, affinely.  Everything downstream
# reasons over that one slot, with verification probes guarding the fit.

_NAT_PROBES = (2, 3, 5, 9)
_NAT_VERIFY = (12, 20)
_SOLVE_CAP = 4096


def _ord_probes():
    return (nat(2), nat(3), nat(5), nat(9), OMEGA, times_nat(OMEGA, 2))


def _fit_affine(values, params, ordinal_params):
    """Fit value(p) = base + scale*p + tail against sampled (param, value)."""
    (p1, v1), (p2, v2) = values[0], values[1]
    gap = p2 - p1 if not ordinal_params else None
    candidates = []
    if ordinal_params:
        # unit scale: value(a) = base + a + tail
        for split in _left_splits(v1):
            base = split
            try:
                rest = left_sub(base, v1)
            except Exception:
                continue
            try:
                tail = left_sub(p1 if isinstance(p1, Ordinal) else nat(p1), rest)
            except Exception:
                continue
            candidates.append((base, ONE, tail))
    else:
        delta = left_sub(v1, v2) if cmp(v1, v2) <= 0 else None
        if delta is None:
            return None
        scale_opts = []
        if delta.is_finite:
            if delta.to_int() % gap == 0:
                scale_opts.append((nat(delta.to_int() // gap), ZERO))
        else:
            k = delta.finite_tail
            stripped = Ordinal(delta.omega1, delta.terms[:-1]) if k else delta
            for scale_total, tail in ((stripped, nat(k)),):
                # scale_total = scale * gap: recover scale by dividing the
                # trailing coefficient when possible
                if not scale_total.terms:
                    continue
                e, c = scale_total.terms[-1]
                if c % gap == 0:
                    scale = Ordinal(0, scale_total.terms[:-1] + ((e, c // gap),))
                    scale_opts.append((scale, tail))
        for scale, tail in scale_opts:
            probe_contrib = add(times_nat(scale, p1), tail)
            for split in _left_splits(v1):
                if add(split, probe_contrib) == v1:
                    candidates.append((split, scale, tail))
                    break
    for base, scale, tail in candidates:
        ok = True
        for p, v in values:
            contrib = p if isinstance(p, Ordinal) else times_nat(scale, p)
            if isinstance(p, Ordinal) and scale != ONE:
                ok = False
                break
            if add(add(base, contrib), tail) != v:
                ok = False
                break
        if ok:
            return (base, scale, tail)
    return None


def _left_splits(c):
    """Candidate left summands of c (prefixes with coefficient splits)."""
    out = [Ordinal(c.omega1, ())]
    for i in range(len(c.terms) + 1):
        out.append(Ordinal(c.omega1, c.terms[:i]))
        if i < len(c.terms):
            e, coeff = c.terms[i]
            for x in range(1, min(coeff, 50)):
                out.append(Ordinal(c.omega1, c.terms[:i] + ((e, x),)))
    seen, uniq = set(), []
    for s in out:
        if s not in seen:
            seen.add(s)
            uniq.append(s)
    return uniq


class _Slot:
    """One affinely varying slot inside otherwise fixed canonical parts."""

    __slots__ = ("kind", "comp", "run", "base", "scale", "tail", "ordinal")

    def __init__(self, kind, comp, run, base, scale, tail, ordinal):
        self.kind = kind      # "count" | "copy" | "letter" | "up"
        self.comp = comp
        self.run = run
        self.base = base
        self.scale = scale
        self.tail = tail
        self.ordinal = ordinal

    def value(self, p):
        if isinstance(p, Ordinal):
            return add(add(self.base, p), self.tail)
        return add(add(self.base, times_nat(self.scale, p)), self.tail)

    def int_value(self, p):
        return self.value(p).to_int()

    def sup(self, bound=None):
        """Supremum of values over the parameter range."""
        if self.ordinal:
            return add(self.base, bound)
        return limit_of_affine(self.base, self.scale)

    def solve_ge(self, c, bound=None):
        """Least parameter p with value(p) >= c, or None."""
        if self.ordinal:
            lo = ZERO
            if cmp(self.value(ZERO), c) >= 0:
                return ZERO
            try:
                lo = left_sub(self.base, c)
            except Exception:
                return ZERO
            for cand in (lo, add(lo, ONE)):
                if bound is not None and cmp(cand, bound) >= 0:
                    continue
                if cmp(self.value(cand), c) >= 0:
                    # walk down while the predecessor still satisfies
                    return cand
            return None
        supv = limit_of_affine(self.base, self.scale) if not self.scale.is_zero else self.value(0)
        if self.scale.is_zero:
            return 0 if cmp(self.value(0), c) >= 0 else None
        if cmp(c, supv) >= 0:
            return None
        p = 0
        while p <= _SOLVE_CAP:
            if cmp(self.value(p), c) >= 0:
                return p
            p += 1
        raise UndecidableTailPattern("threshold search exceeded the cap")

    def solve_eq(self, c, bound=None):
        """All parameters with value(p) == c (finitely many for moving slots)."""
        if self.ordinal:
            try:
                rho = left_sub(self.base, c)
            except Exception:
                return []
            sols = []
            for a in _left_splits(rho) + [rho]:
                if bound is not None and cmp(a, bound) >= 0:
                    continue
                if self.value(a) == c and a not in sols:
                    sols.append(a)
            sols.sort(key=functools.cmp_to_key(cmp))
            return sols
        if self.scale.is_zero:
            return []
        if cmp(c, limit_of_affine(self.base, self.scale)) >= 0:
            return []  # values stay strictly below their supremum
        sols, p = [], 0
        while p <= _SOLVE_CAP:
            v = self.value(p)
            if v == c:
                sols.append(p)
            if cmp(v, c) > 0:
                break
            p += 1
        else:
            raise UndecidableTailPattern("equality search exceeded the cap")
        return sols


class SymbolicSeries:
    """Members s_p of a parameterized family, fitted from probes."""

    def __init__(self, d, template, ordinal=False, bound=None):
        self.d = d
        self.template = template
        self.ordinal = ordinal
        self.bound = bound
        self._small = {}
        probes = _ord_probes() if ordinal else _NAT_PROBES
        nodes = [resolve(d, instantiate(template, p)) for p in probes]
        self.parts, self.slot = self._unify(probes, nodes)
        if not ordinal:
            for p in _NAT_VERIFY:
                if self.at(p).parts != self._predict(p):
                    raise UndecidableTailPattern("series fit failed verification")

    # construction ------------------------------------------------------------

    def _unify(self, probes, nodes):
        shapes = [n.parts for n in nodes]
        first = shapes[0]
        for s in shapes[1:]:
            if len(s) != len(first):
                raise UndecidableTailPattern("template shape varies with the parameter")
        diffs = []
        for ci in range(len(first)):
            kinds = {s[ci][0] for s in shapes}
            if len(kinds) != 1:
                raise UndecidableTailPattern("template component kind varies")
            if all(s[ci] == first[ci] for s in shapes):
                continue
            diffs.append(ci)
        if not diffs:
            return first, None
        if len(diffs) != 1:
            raise UndecidableTailPattern("more than one varying slot")
        ci = diffs[0]
        kind = first[ci][0]
        if kind == "up":
            fit = _fit_affine([(p, s[ci][1]) for p, s in zip(probes, shapes)],
                              probes, self.ordinal)
            if fit is None:
                raise UndecidableTailPattern("non-affine position slot")
            return first, _Slot("up", ci, None, *fit, self.ordinal)
        if kind == "copy":
            slots = {s[ci][1] for s in shapes}
            if len(slots) != 1:
                raise UndecidableTailPattern("copy slot index varies")
            fit = _fit_affine([(p, nat(s[ci][2])) for p, s in zip(probes, shapes)],
                              probes, self.ordinal)
            if fit is None:
                raise UndecidableTailPattern("non-affine copy slot")
            return first, _Slot("copy", ci, None, *fit, self.ordinal)
        if kind == "runs":
            runs = [s[ci][1] for s in shapes]
            if len({len(r) for r in runs}) != 1:
                raise UndecidableTailPattern("run shape varies with the parameter")
            rdiffs = [j for j in range(len(runs[0]))
                      if any(r[j] != runs[0][j] for r in runs)]
            if len(rdiffs) != 1:
                raise UndecidableTailPattern("more than one varying run")
            j = rdiffs[0]
            letters = {r[j][0] for r in runs}
            counts = {r[j][1] for r in runs}
            if len(letters) > 1 and len(counts) > 1:
                raise UndecidableTailPattern("both letter and count vary")
            if len(letters) > 1:
                fit = _fit_affine([(p, nat(r[j][0])) for p, r in zip(probes, runs)],
                                  probes, self.ordinal)
                if fit is None:
                    raise UndecidableTailPattern("non-affine letter slot")
                return first, _Slot("letter", ci, j, *fit, self.ordinal)
            fit = _fit_affine([(p, r[j][1]) for p, r in zip(probes, runs)],
                              probes, self.ordinal)
            if fit is None:
                raise UndecidableTailPattern("non-affine count slot")
            if self.ordinal and not fit[2].is_finite:
                raise UndecidableTailPattern(
                    "ordinal parameter followed by an infinite same-letter tail")
            return first, _Slot("count", ci, j, *fit, self.ordinal)
        raise UndecidableTailPattern("varying component of kind %s" % kind)

    def _predict(self, p):
        if self.slot is None:
            return self.parts
        out = list(self.parts)
        s = self.slot
        if s.kind == "up":
            out[s.comp] = ("up", s.value(p))
        elif s.kind == "copy":
            c = self.parts[s.comp]
            out[s.comp] = ("copy", c[1], s.int_value(p))
        else:
            runs = list(self.parts[s.comp][1])
            letter, count = runs[s.run]
            if s.kind == "letter":
                runs[s.run] = (s.int_value(p), count)
            else:
                runs[s.run] = (letter, s.value(p))
            out[s.comp] = ("runs", tuple(runs))
        return tuple(out)

    @property
    def constant(self):
        return self.slot is None

    def at(self, p):
        key = p if not isinstance(p, Ordinal) else ("o", p)
        if key not in self._small:
            self._small[key] = resolve(self.d, instantiate(self.template, p))
        return self._small[key]

    def params_upto(self, k):
        if self.ordinal:
            out = [nat(i) for i in range(k)]
            if self.bound is not None and cmp(OMEGA, self.bound) < 0:
                out += [OMEGA, add(OMEGA, ONE), times_nat(OMEGA, 2)]
            return out
        return list(range(k))

    # profiles ------------------------------------------------------------------

    def le_profile(self, u):
        """Profile of {p : u <= s_p} over the parameter range."""
        u = _as_node(self.d, u)
        ucore = u.parts
        while ucore and ucore[-1][0] == "below":
            ucore = ucore[:-1]
        if self.constant:
            return Profile.const(leq_parts(ucore, self.parts) or ucore == self.parts)
        return self._patch_small(self._walk_profile(ucore, equality=False),
                                 ucore, equality=False)

    def eq_profile(self, u):
        u = _as_node(self.d, u)
        if u.parts and u.parts[-1][0] == "below":
            return Profile.never()
        if self.constant:
            return Profile.const(u.parts == self.parts)
        return self._patch_small(self._walk_profile(u.parts, equality=True),
                                 u.parts, equality=True)

    def _patch_small(self, prof, u, equality):
        """Small parameters canonicalize into different shapes than the tail
        (runs merge, zero-count steps vanish); correct them pointwise."""
        small = [nat(0), nat(1)] if self.ordinal else [0, 1]
        extras, holes = list(prof.extras), list(prof.holes)
        for p in small:
            actual = self._concrete_holds(u, p, equality)
            claimed = prof.holds_at(p)
            if actual and not claimed:
                extras.append(p)
            elif claimed and not actual:
                holes.append(p)
        if extras == list(prof.extras) and holes == list(prof.holes):
            return prof
        return prof.patched(extras, holes)

    def _concrete_holds(self, u_parts, p, equality):
        sp = self.at(p).parts
        return u_parts == sp if equality else (leq_parts(u_parts, sp))

    def _walk_profile(self, u, equality):
        s = self.parts
        probe = 2 if not self.ordinal else nat(2)
        for i in range(len(s)):
            if i >= len(u):
                # u is a proper prefix of every member
                return Profile.never() if equality else Profile.always()
            if i != self.slot.comp:
                if u[i] == s[i]:
                    continue
                # divergence on a fixed component: answer is constant in p
                return Profile.const(self._concrete_holds(u, probe, equality))
            return self._slot_compare(u, i, equality)
        return Profile.never()  # u has components past the whole member shape

    def _rest_matches(self, u, i_next, p, equality):
        """Compare the remainder of u against the instantiated member."""
        sp = self.at(p).parts
        if equality:
            return u == sp
        return leq_parts(u, sp)

    def _slot_compare(self, u, i, equality):
        slot = self.slot
        s = self.parts
        u_last_comp = i == len(u) - 1
        uc, sc = u[i], s[i]
        if uc[0] != sc[0]:
            return Profile.never()
        if slot.kind == "up":
            c = uc[1]
            if not equality and u_last_comp:
                p0 = slot.solve_ge(c, self.bound)
                return Profile.never() if p0 is None else self._le_from(u, p0)
            sols = slot.solve_eq(c, self.bound)
            good = [p for p in sols if self._rest_matches(u, i + 1, p, equality)]
            return Profile.only(tuple(good))
        if slot.kind == "copy":
            if uc[1] != sc[1]:
                return Profile.never()
            sols = slot.solve_eq(nat(uc[2]), self.bound)
            good = [p for p in sols if self._rest_matches(u, i + 1, p, equality)]
            return Profile.only(tuple(good))
        # runs component
        uruns, sruns = uc[1], sc[1]
        j = slot.run
        if len(uruns) < j + (0 if u_last_comp else 1):
            pass
        # fixed runs before the slot must match (or u may end inside them)
        for jj in range(min(j, len(uruns))):
            if uruns[jj] == sruns[jj]:
                continue
            if equality:
                return Profile.never()
            # divergence before the slot: constant answer
            return Profile.const(self._concrete_holds(u, 2 if not self.ordinal else nat(2), False))
        if len(uruns) <= j:
            if equality:
                return Profile.never()
            if u_last_comp:
                return Profile.always()
            return Profile.never()
        ul, ucnt = uruns[j]
        if slot.kind == "letter":
            sols = slot.solve_eq(nat(ul), self.bound)
            if uruns[j][1] != sruns[j][1]:
                sols = []
            good = [p for p in sols if self._rest_matches(u, i, p, equality)]
            return Profile.only(tuple(good))
        # count slot
        sl = sruns[j][0]
        if ul != sl:
            return Profile.never()
        u_ends_here = u_last_comp and j == len(uruns) - 1
        if u_ends_here and not equality:
            p0 = slot.solve_ge(ucnt, self.bound)
            return Profile.never() if p0 is None else self._le_from(u, p0)
        sols = slot.solve_eq(ucnt, self.bound)
        good = [p for p in sols if self._rest_matches(u, i, p, equality)]
        return Profile.only(tuple(good))

    def _le_from(self, u, p0):
        if not isinstance(p0, Ordinal):
            if not self._concrete_holds(u, max(p0, 0), False):
                raise UndecidableTailPattern("threshold verification failed")
        return Profile.from_(p0, self.bound)

    # meets ----------------------------------------------------------------------

    def meet_profile_with(self, t):
        """("const", height) or ("increasing", sup of heights) for
        ht(meet(s_p, t)) over the parameter range, small parameters included."""
        t = _as_node(self.d, t)
        probes = [2, 3, 5, 9] if not self.ordinal else [nat(2), nat(3), nat(5), OMEGA]
        hs = []
        for p in probes:
            m = meet_parts(self.at(p).parts, t.parts)
            hs.append((p, node_at(self.d, m).ht))
        small_sup = ZERO
        for p in ([0, 1] if not self.ordinal else [nat(0), nat(1)]):
            m = meet_parts(self.at(p).parts, t.parts)
            h = node_at(self.d, m).ht
            if cmp(h, small_sup) > 0:
                small_sup = h
        if all(h == hs[0][1] for _, h in hs):
            sup = hs[0][1] if cmp(hs[0][1], small_sup) >= 0 else small_sup
            return ("const", sup)
        fit = _fit_affine(hs, probes, self.ordinal)
        if fit is None:
            raise UndecidableTailPattern("meet heights are not affine")
        base, scale, tail = fit
        if self.ordinal:
            sup = add(base, self.bound)
        else:
            sup = limit_of_affine(base, scale)
        if cmp(sup, small_sup) < 0:
            sup = small_sup
        if cmp(sup, t.ht) > 0:
            sup = t.ht
        return ("increasing", sup)


def _series_of(d, spec):
    if isinstance(spec, OmegaFamily):
        return SymbolicSeries(d, spec.template, ordinal=False)
    if isinstance(spec, ClubFamily):
        bound = resolve(d, spec.anchor).ht
        return SymbolicSeries(d, spec.template, ordinal=True, bound=bound)
    raise TypeError(spec)


class Profile:
    """The set {p : property(s_p)}: a tail, or a finite set, plus a finite
    patch of small parameters whose canonical shapes differ from the tail."""

    __slots__ = ("kind", "data", "bound", "extras", "holes")

    def __init__(self, kind, data=None, bound=None, extras=(), holes=()):
        self.kind = kind
        self.data = data
        self.bound = bound
        self.extras = tuple(extras)
        self.holes = tuple(holes)

    @classmethod
    def never(cls):
        return cls("only", ())

    @classmethod
    def always(cls):
        return cls("from", 0)

    @classmethod
    def from_(cls, p0, bound=None):
        return cls("from", p0, bound)

    @classmethod
    def only(cls, ps):
        return cls("only", tuple(ps))

    @classmethod
    def const(cls, b):
        return cls.always() if b else cls.never()

    def patched(self, extras, holes):
        return Profile(self.kind, self.data, self.bound,
                       tuple(extras), tuple(holes))

    @property
    def eventually(self):
        """Holds for all sufficiently large parameters."""
        return self.kind == "from"

    @property
    def infinitely(self):
        return self.kind == "from"

    @property
    def ever(self):
        return self.kind == "from" or bool(self.data) or bool(self.extras)

    def _base_holds(self, p):
        if self.kind == "from":
            if isinstance(self.data, Ordinal) or isinstance(p, Ordinal):
                pp = p if isinstance(p, Ordinal) else nat(p)
                dd = self.data if isinstance(self.data, Ordinal) else nat(self.data)
                return cmp(dd, pp) <= 0
            return p >= self.data
        return p in self.data

    def holds_at(self, p):
        if p in self.extras:
            return True
        if p in self.holes:
            return False
        return self._base_holds(p)

    def first(self):
        candidates = [p for p in self.extras]
        if self.kind == "from":
            base = self.data
            while base in self.holes:
                base = _next_param(base)
            candidates.append(base)
        else:
            candidates.extend(p for p in self.data if p not in self.holes)
        if not candidates:
            return None
        if any(isinstance(c, Ordinal) for c in candidates):
            candidates = [c if isinstance(c, Ordinal) else nat(c) for c in candidates]
            return sorted(candidates, key=functools.cmp_to_key(cmp))[0]
        return min(candidates)

    def __repr__(self):
        return "Profile(%s, %r, +%r, -%r)" % (self.kind, self.data,
                                              self.extras, self.holes)


# -- the members of set specs ------------------------------------------------------

def spec_parts(spec):
    if isinstance(spec, UnionSpec):
        out = []
        for p in spec.parts:
            out.extend(spec_parts(p))
        return out
    return [spec]


def contains(d, spec, x):
    """Decidable membership of a resolved node in a set spec."""
    x = _as_node(d, x)
    for part in spec_parts(spec):
        if isinstance(part, Explicit):
            if any(resolve(d, p).parts == x.parts for p in part.points):
                return True
        elif isinstance(part, Branch):
            if leq(d, x, _as_node(d, part.top)):
                return True
        elif isinstance(part, ConeSet):
            if leq(d, _as_node(d, part.t), x):
                return True
        elif isinstance(part, (OmegaFamily, ClubFamily)):
            if _series_of(d, part).eq_profile(x).ever:
                return True
        else:
            raise TypeError(part)
    return False


def is_countable_spec(d, spec):
    for part in spec_parts(spec):
        if isinstance(part, ClubFamily):
            if resolve(d, part.anchor).ht.cof() is Cofinality.OMEGA1:
                return False
        elif isinstance(part, Branch):
            if _as_node(d, part.top).ht.cof() is Cofinality.OMEGA1 or \
                    not _as_node(d, part.top).ht.is_countable:
                return False
        elif isinstance(part, ConeSet):
            return False  # cones are not presented as countable lists
    return True


def sample_members(d, spec, k=6):
    out = []
    for part in spec_parts(spec):
        if isinstance(part, Explicit):
            out.extend(resolve(d, p) for p in part.points)
        elif isinstance(part, (OmegaFamily, ClubFamily)):
            series = _series_of(d, part)
            for p in series.params_upto(k):
                out.append(series.at(p))
        elif isinstance(part, Branch):
            top = _as_node(d, part.top)
            out.append(top)
            hts = [ZERO, ONE]
            if cmp(OMEGA, top.ht) < 0:
                hts.append(OMEGA)
            for h in hts:
                if cmp(h, top.ht) <= 0:
                    out.append(ancestor_at(d, top, h))
        elif isinstance(part, ConeSet):
            base = _as_node(d, part.t)
            out.append(base)
            out.extend(children(d, base, 2))
    return out


# -- convergence ---------------------------------------------------------------------

def _local_base_uses_own_cone(x, topology):
    if topology is Topology.SIGMA_CW:
        return x.cof is not Cofinality.OMEGA
    return x.cof is Cofinality.ZERO


def cluster_or_limit(d, seq, x, topology):
    """Does the sequence converge to / cluster at x?

    Decided against the local base at x: wedges based at x itself where the
    topology allows, wedges based at I(T)-points below x otherwise.
    """
    x = _as_node(d, x)
    if isinstance(seq.tail, EventuallyConstant):
        c = resolve(d, seq.tail.point)
        return Verdict.CONVERGES if c.parts == x.parts else Verdict.NEITHER
    if not isinstance(seq.tail, Indexed):
        raise TypeError("sequence needs a tail")
    series = SymbolicSeries(d, seq.tail.template, ordinal=False)
    if series.constant:
        c = series.at(0)
        return Verdict.CONVERGES if c.parts == x.parts else Verdict.NEITHER

    lex = series.le_profile(x)
    eqx = series.eq_profile(x)

    # children of x entered by the sequence (candidates for wedge
    # exclusions): probe small parameters and, crucially, the range where
    # the sequence first climbs above x
    probe_ps = list(series.params_upto(10))
    start = lex.first()
    if start is not None:
        p = start
        for _ in range(10):
            probe_ps.append(p)
            p = _next_param(p)
    cands = {}
    for p in probe_ps:
        sp = series.at(p)
        if leq_parts(x.parts, sp.parts) and sp.parts != x.parts:
            f = child_toward(d, x, sp)
            cands[f.parts] = f
    excl_ok = True
    for f in cands.values():
        pf = series.le_profile(f)
        if pf.kind == "from":
            excl_ok = False

    own_cone = _local_base_uses_own_cone(x, topology)
    if own_cone:
        b1_conv = lex.eventually or eqx.eventually
        b1_clust = lex.infinitely
    elif x.cof is Cofinality.OMEGA:
        if lex.eventually:
            b1_conv = b1_clust = True
        else:
            kind, sup = series.meet_profile_with(x)
            reach = kind == "increasing" and cmp(sup, x.ht) == 0
            b1_conv = b1_clust = reach
    else:
        # coarse wedge base below an uncountable-cofinality point
        if lex.eventually:
            b1_conv = b1_clust = True
        elif lex.infinitely:
            b1_conv, b1_clust = False, True
        else:
            kind, sup = series.meet_profile_with(x)
            reach = kind == "increasing" and cmp(sup, x.ht) == 0
            b1_conv = b1_clust = reach

    if b1_conv and excl_ok:
        return Verdict.CONVERGES
    if b1_clust and excl_ok:
        return Verdict.CLUSTERS_ONLY
    return Verdict.NEITHER


# -- witness constructions -------------------------------------------------------------

@dataclass(frozen=True)
class CountablyClosedWitness:
    p: Node
    sup_of_meets: Ordinal
    verified: bool

    def to_json(self):
        from .dsl import print_address
        return {"kind": "countably-closed", "p": print_address(self.p.address()),
                "sup_of_meets": str(self.sup_of_meets), "verified": self.verified}


def countably_closed_witness(d, t, S):
    """A point p in I(T) with p <= t and V_p disjoint from the countable set S,
    certifying that the closure of S misses V_t."""
    t = _as_node(d, t)
    if t.cof is not Cofinality.OMEGA1:
        raise PreconditionFailed("witness requires cf(t) uncountable, got %s" % t.cof)
    if not is_countable_spec(d, S):
        raise PreconditionFailed("S must be countable")
    sup = ZERO
    for part in spec_parts(S):
        if isinstance(part, Explicit):
            for pt in part.points:
                n = resolve(d, pt)
                if leq_parts(t.parts, n.parts):
                    raise PreconditionFailed("an element of S lies in the cone of t")
                h = node_at(d, meet_parts(n.parts, t.parts)).ht
                if cmp(h, sup) > 0:
                    sup = h
        elif isinstance(part, (OmegaFamily, ClubFamily)):
            series = _series_of(d, part)
            if series.le_profile(t).ever or series.eq_profile(t).ever:
                raise PreconditionFailed("an element of S lies in the cone of t")
            kind, s = series.meet_profile_with(t)
            if cmp(s, sup) > 0:
                sup = s
        elif isinstance(part, Branch):
            top = _as_node(d, part.top)
            if leq_parts(t.parts, top.parts):
                raise PreconditionFailed("an element of S lies in the cone of t")
            h = node_at(d, meet_parts(top.parts, t.parts)).ht
            if cmp(h, sup) > 0:
                sup = h
        else:
            raise PreconditionFailed("cone sets are not countable inputs")
    if cmp(sup, t.ht) >= 0:
        raise SupNotRepresentable("meets are cofinal in t; no separating point exists")
    p = ancestor_at(d, t, add(sup, ONE))
    verified = _verify_cone_avoids(d, p, S) and p.in_I and leq(d, p, t)
    return CountablyClosedWitness(p, sup, verified)


def _verify_cone_avoids(d, p, S):
    for part in spec_parts(S):
        if isinstance(part, Explicit):
            if any(leq(d, p, resolve(d, pt)) for pt in part.points):
                return False
        elif isinstance(part, (OmegaFamily, ClubFamily)):
            if _series_of(d, part).le_profile(p).ever:
                return False
        elif isinstance(part, Branch):
            if leq(d, p, _as_node(d, part.top)):
                return False
    return True


@dataclass(frozen=True)
class ClubWitness:
    pairs: tuple            # concrete (r_j, s_j) prefix
    r: Node                 # sup of the r_j
    r_heights: tuple
    seq: SeqSpec            # the (s_j) as a sequence spec
    verdict: Verdict
    verified: bool

    def to_json(self):
        from .dsl import print_address
        return {
            "kind": "club",
            "pairs": [[print_address(r.address()), print_address(s.address())]
                      for r, s in self.pairs],
            "r": print_address(self.r.address()),
            "cluster_verdict": self.verdict.value,
            "verified": self.verified,
        }


def _least_member_above(d, S, lower, avoid_cone):
    """Least-parameter member of S in V_lower avoiding V_avoid_cone."""
    best = None
    for part in spec_parts(S):
        if isinstance(part, Explicit):
            for k, pt in enumerate(part.points):
                n = resolve(d, pt)
                if leq(d, lower, n) and not leq(d, avoid_cone, n):
                    if best is None:
                        best = n
        elif isinstance(part, (OmegaFamily, ClubFamily)):
            series = _series_of(d, part)
            prof = series.le_profile(lower)
            bad = series.le_profile(avoid_cone)
            p = prof.first()
            if p is None:
                continue
            tries = 0
            while p is not None and tries < 200:
                if prof.holds_at(p) and not bad.holds_at(p):
                    cand = series.at(p)
                    if best is None:
                        best = cand
                    break
                p = _next_param(p)
                tries += 1
        elif isinstance(part, Branch):
            top = _as_node(d, part.top)
            if leq(d, lower, top) and not leq(d, avoid_cone, top):
                if best is None:
                    best = top
    return best


def _next_param(p):
    if isinstance(p, Ordinal):
        return add(p, ONE)
    return p + 1


def club_accumulation(d, t, S, steps=8):
    """The closed-unbounded accumulation construction below an
    uncountable-cofinality point t: alternately pick s_j in S above r_j + 1
    and set r_{j+1} to the meet of s_j with t; r is the supremum."""
    t = _as_node(d, t)
    if t.cof is not Cofinality.OMEGA1:
        raise PreconditionFailed("club accumulation requires cf(t) uncountable")
    r = resolve(d, ())  # r_0 = root
    pairs = []
    for _ in range(steps):
        toward = child_toward(d, r, t)
        s = _least_member_above(d, S, toward, t)
        if s is None:
            raise NotAccumulating(
                "no member of S above %r outside the cone of t" % toward)
        pairs.append((r, s))
        r_next = meet(d, s, t)
        if cmp(r_next.ht, r.ht) <= 0 and pairs[:-1]:
            raise UndecidableTailPattern("meets stopped increasing")
        r = r_next
    hts = [p[0].ht for p in pairs[1:]] + [r.ht]
    deltas = {str(left_sub(a, b)) for a, b in zip(hts, hts[1:])}
    if len(deltas) != 1:
        raise UndecidableTailPattern("accumulation pattern is not affine")
    delta = left_sub(hts[-2], hts[-1])
    r_sup_ht = limit_of_affine(hts[0], delta)
    if cmp(r_sup_ht, t.ht) >= 0:
        raise SupNotRepresentable("r_j are cofinal in t itself")
    r_sup = ancestor_at(d, t, r_sup_ht)
    seq = SeqSpec(head=tuple(s.address() for _, s in pairs), tail=None)
    verdict = _cluster_of_concrete_tail(d, [s for _, s in pairs], r_sup)
    verified = all(cmp(a.ht, b.ht) < 0 for (a, _), (b, _) in zip(pairs, pairs[1:]))
    verified = verified and cmp(r_sup.ht, t.ht) < 0 and verdict is not Verdict.NEITHER
    for (rj, sj), (rk, _) in zip(pairs, pairs[1:]):
        verified = verified and meet(d, sj, t).parts == rk.parts
    return ClubWitness(tuple(pairs), r_sup, tuple(hts), seq, verdict, verified)


def _cluster_of_concrete_tail(d, nodes, x):
    """Cluster verdict for a finite prefix extended by its affine pattern."""
    tpl = _fit_template_from_nodes(d, nodes)
    if tpl is None:
        # fall back: every wedge at x must contain some node; sample checks
        ok = all(leq(d, node_at(d, meet_parts(n.parts, x.parts)), x) for n in nodes)
        return Verdict.CLUSTERS_ONLY if ok else Verdict.NEITHER
    return cluster_or_limit(d, SeqSpec(tail=Indexed(tpl)), x, Topology.CW)


def _fit_template_from_nodes(d, nodes):
    """Reconstruct a one-parameter template from concrete nodes, if affine."""
    shapes = [n.parts for n in nodes]
    if len({len(s) for s in shapes}) != 1:
        return None
    first = shapes[0]
    diffs = []
    for ci in range(len(first)):
        if any(s[ci] != first[ci] for s in shapes):
            diffs.append(ci)
    if len(diffs) != 1:
        return None
    ci = diffs[0]
    idx = list(range(len(shapes)))

    def surround(mid):
        steps = []
        for k in range(ci):
            steps.extend(_parts_component_steps(first[k]))
        steps.extend(mid)
        for k in range(ci + 1, len(first)):
            steps.extend(_parts_component_steps(first[k]))
        return tuple(steps)

    if first[ci][0] == "copy":
        if len({s[ci][1] for s in shapes}) != 1:
            return None
        fit = _fit_affine([(i, nat(s[ci][2])) for i, s in zip(idx, shapes)], idx, False)
        if fit is None or not fit[0].is_finite or not fit[1].is_finite:
            return None
        return surround([Copy(first[ci][1], Param(fit[0], fit[1]))])
    if first[ci][0] != "runs":
        return None
    runsets = [s[ci][1] for s in shapes]
    if len({len(r) for r in runsets}) != 1:
        return None
    rdiffs = [j for j in range(len(runsets[0]))
              if any(r[j] != runsets[0][j] for r in runsets)]
    if len(rdiffs) != 1:
        return None
    j = rdiffs[0]
    letters = {r[j][0] for r in runsets}
    mid = []
    if len(letters) > 1:
        if len({r[j][1] for r in runsets}) != 1 or runsets[0][j][1] != ONE:
            return None
        fit = _fit_affine([(i, nat(r[j][0])) for i, r in zip(idx, runsets)], idx, False)
        if fit is None or not fit[0].is_finite or not fit[1].is_finite:
            return None
        slot_step = Child(Param(fit[0], fit[1]))
    else:
        fit = _fit_affine([(i, r[j][1]) for i, r in zip(idx, runsets)], idx, False)
        if fit is None:
            return None
        base, scale, tail = fit
        if not tail.is_zero and not scale.is_finite:
            return None
        slot_step = Word((runsets[0][j][0],), Param(add(base, tail), scale))
    for jj, (l, c) in enumerate(runsets[0]):
        mid.append(slot_step if jj == j else Word((l,), c))
    return surround(mid)


def _parts_component_steps(comp):
    if comp[0] == "up":
        return [Up(comp[1])]
    if comp[0] == "runs":
        return [Word((l,), c) for l, c in comp[1]]
    if comp[0] == "copy":
        return [Copy(comp[1], comp[2])]
    return [Below()]


# -- Frechet-Urysohn extraction ----------------------------------------------------------

def fu_extract(d, A, t):
    """A sequence from A converging to t in the countably coarse wedge
    topology, built by the three-case analysis on cf(t) and on how many
    immediate-successor cones of t meet A."""
    t = _as_node(d, t)
    if contains(d, A, t):
        raise PreconditionFailed("t itself belongs to A")

    meeting, meeting_infinite = _meeting_children(d, A, t)
    if t.cof is not Cofinality.OMEGA:
        if meeting_infinite:
            return _pick_in_child_cones(d, A, t)
        if not meeting:
            raise NotInClosure("no immediate-successor cone of t meets A")
        # finitely many meeting cones and a strong local base at t: the wedge
        # excluding them misses A entirely
        raise NotInClosure(
            "only finitely many cones below t's wedge meet A; t is not in the closure")
    if meeting_infinite:
        return _pick_in_child_cones(d, A, t)
    F = meeting
    base_nodes = cofinal_I_nodes(d, t, 24)
    head = []
    tpl = None
    for part in spec_parts(A):
        if isinstance(part, (OmegaFamily, ClubFamily)):
            series = _series_of(d, part)
            ok = True
            sel = []
            for u in base_nodes[:8]:
                prof = series.le_profile(u)
                p = prof.first()
                tries = 0
                while p is not None and tries < 300:
                    if prof.holds_at(p) and not any(
                            series.le_profile(f).holds_at(p) for f in F) \
                            and series.at(p).parts != t.parts:
                        sel.append((u, p))
                        break
                    p = _next_param(p)
                    tries += 1
                else:
                    ok = False
                if not ok:
                    break
            if ok and len(sel) == 8:
                nodes = [series.at(p) for _, p in sel]
                tpl = _fit_template_from_nodes(d, nodes)
                head = [n.address() for n in nodes]
                break
    if not head:
        raise ChoiceUnavailable(
            "A's description cannot exhibit members in the required wedges")
    seq = SeqSpec(head=tuple(head), tail=Indexed(tpl) if tpl else None)
    verdict = cluster_or_limit(d, SeqSpec(tail=Indexed(tpl)), t, Topology.SIGMA_CW) \
        if tpl else Verdict.NEITHER
    if verdict is not Verdict.CONVERGES:
        raise NotInClosure("extracted sequence does not converge to t", witness=seq)
    return seq


def _meeting_children(d, A, t):
    """(finite list of meeting children, True-if-infinitely-many)."""
    meeting = {}
    infinite = False
    kids = children(d, t, 12)
    for part in spec_parts(A):
        if isinstance(part, Explicit):
            for pt in part.points:
                n = resolve(d, pt)
                if leq_parts(t.parts, n.parts) and n.parts != t.parts:
                    f = child_toward(d, t, n)
                    meeting[f.parts] = f
        elif isinstance(part, (OmegaFamily, ClubFamily)):
            series = _series_of(d, part)
            fs = {}
            for p in series.params_upto(10):
                sp = series.at(p)
                if leq_parts(t.parts, sp.parts) and sp.parts != t.parts:
                    f = child_toward(d, t, sp)
                    fs[f.parts] = f
            if len(fs) >= 6:
                infinite = True
            meeting.update(fs)
        elif isinstance(part, Branch):
            top = _as_node(d, part.top)
            if leq_parts(t.parts, top.parts) and top.parts != t.parts:
                f = child_toward(d, t, top)
                meeting[f.parts] = f
        elif isinstance(part, ConeSet):
            base = _as_node(d, part.t)
            if leq_parts(t.parts, base.parts) and base.parts != t.parts:
                # the cone hangs above one child of t
                f = child_toward(d, t, base)
                meeting[f.parts] = f
            elif leq_parts(base.parts, t.parts):
                # V_t is inside the cone: every child cone meets it
                if not t.ims.is_finite:
                    infinite = True
                for k in kids:
                    meeting[k.parts] = k
    return list(meeting.values()), infinite


def _fit_stable_template(d, nodes, need=8):
    """Fit a template from a run of the nodes, tolerating a few leading
    members whose canonical shape differs (small-parameter merges)."""
    for start in range(0, max(1, len(nodes) - need + 1)):
        window = nodes[start:start + need]
        if len(window) < need:
            break
        tpl = _fit_template_from_nodes(d, window)
        if tpl is not None:
            return tpl
    return None


def _pick_in_child_cones(d, A, t):
    """Case: countably many immediate-successor cones of t meet A."""
    picked = []
    for part in spec_parts(A):
        if isinstance(part, (OmegaFamily, ClubFamily)):
            series = _series_of(d, part)
            seen = set()
            for p in series.params_upto(40):
                sp = series.at(p)
                if leq_parts(t.parts, sp.parts) and sp.parts != t.parts:
                    f = child_toward(d, t, sp)
                    if f.parts not in seen:
                        seen.add(f.parts)
                        picked.append(sp)
                if len(picked) >= 12:
                    break
            if len(picked) >= 8:
                tpl = _fit_stable_template(d, picked)
                if tpl is not None:
                    seq = SeqSpec(head=tuple(n.address() for n in picked[:8]),
                                  tail=Indexed(tpl))
                    if cluster_or_limit(d, SeqSpec(tail=Indexed(tpl)), t,
                                        Topology.SIGMA_CW) is Verdict.CONVERGES:
                        return seq
        elif isinstance(part, Explicit):
            for pt in part.points:
                n = resolve(d, pt)
                if leq_parts(t.parts, n.parts) and n.parts != t.parts:
                    picked.append(n)
    raise ChoiceUnavailable("could not assemble a convergent selection from A")


# -- maximality of the countably coarse wedge topology -------------------------------------

ALREADY_SIGMA_OPEN = "already-sigma-open"


@dataclass(frozen=True)
class MaximalityWitness:
    t: Node
    seq: SeqSpec
    verified: bool

    def to_json(self):
        from .dsl import print_address
        return {"kind": "maximality", "t": print_address(self.t.address()),
                "head": [print_address(s) for s in self.seq.head],
                "verified": self.verified}


def maximality_witness(d, opens):
    """For a finite union of cone-difference sets: either a minimal element of
    countable cofinality together with an increasing I(T)-sequence outside the
    union that converges to it (so the union cannot be open in any countably
    compact refinement), or the verdict that the union is already open in the
    countably coarse wedge topology."""
    bases = []
    for U in opens:
        if isinstance(U, (Cone, Wedge, CDiff)):
            bases.append(_as_node(d, U.t))
        elif isinstance(U, ConeComplement):
            if not _as_node(d, U.t).is_root:  # the complement of the root cone is empty
                bases.append(resolve(d, ()))
        else:
            raise TypeError(U)
    minimal = []
    for b in bases:
        if not any(leq_parts(o.parts, b.parts) and o.parts != b.parts for o in bases):
            minimal.append(b)
    for t in minimal:
        if t.cof is Cofinality.OMEGA:
            seq_nodes = cofinal_I_nodes(d, t, 8)
            outside = all(
                not any(member(d, n, U) for U in opens) for n in seq_nodes)
            tpl = _fit_template_from_nodes(d, seq_nodes)
            seq = SeqSpec(head=tuple(n.address() for n in seq_nodes),
                          tail=Indexed(tpl) if tpl else None)
            verified = outside
            if tpl is not None:
                verified = verified and cluster_or_limit(
                    d, SeqSpec(tail=Indexed(tpl)), t,
                    Topology.SIGMA_CW) is Verdict.CONVERGES
            return MaximalityWitness(t, seq, verified)
    return ALREADY_SIGMA_OPEN
