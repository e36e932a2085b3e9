"""The hat and tilde constructions and their round-trip laws.

``hat`` splits every node of uncountable cofinality off from its predecessors
by a new point with a unique immediate successor, and gives every
upper-bound-less chain of uncountable cofinality its missing supremum.  On a
chain-complete tree the result is the coarse wedge realization of the
Stone-Cech compactification of the countably coarse wedge space.

``tilde`` deletes every level of uncountable cofinality.  tilde(hat(d)) always
recovers d; hat(tilde(d)) recovers d exactly when every uncountable-cofinality
node has at most one immediate successor.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NotClosed, PreconditionFailed, UndecidableTailPattern
from .ordinals import ONE, Cofinality, add, cmp, nat, pred
from .trees import (
    Below, CARD_OMEGA, Card, Child, Copy, Full, Graft, HatOf, Node,
    OMEGA_BRANCH, Seg, TildeOf, Up, Word, ancestor_at, child_toward, children,
    hat_shift, height, is_chain_complete, leq, leq_parts, meet, meet_parts,
    node_at, resolve, structure_ok, tilde_shift, unc_sites, validate, view,
)
from .topology import (
    Branch, ClubFamily, ConeSet, Explicit, OmegaFamily, SeqSpec, Topology,
    UnionSpec, Verdict, cluster_or_limit, contains, fu_extract,
    sample_members, spec_parts, _series_of,
)


# -- the constructions ----------------------------------------------------------

@dataclass(frozen=True)
class HatMap:
    """Node correspondence between d and hat(d): originals keep their
    addresses; the split point below an uncountable-cofinality node t is
    addressed by t's address followed by a below-marker."""
    source: object
    result: object

    def forward(self, steps):
        return tuple(steps)

    def s_of(self, steps):
        t = resolve(self.source, steps)
        if t.cof is not Cofinality.OMEGA1:
            raise PreconditionFailed(
                "split points exist below uncountable-cofinality nodes only")
        return tuple(steps) + (Below(),)

    def describe(self, steps):
        return resolve(self.result, steps)


def hat(d):
    structure_ok(d)
    out = HatOf(d)
    return out, HatMap(d, out)


def tilde(d):
    structure_ok(d)
    return TildeOf(d)


# -- normalization ----------------------------------------------------------------

def normalize(d):
    """Rewrite a description into an equivalent simpler one where the
    wrappers act trivially or collapse."""
    if isinstance(d, Seg):
        return d
    if isinstance(d, Full):
        if d.k == 1:
            return Seg(pred(d.h))
        return d
    if isinstance(d, Graft):
        base = normalize(d.base)
        children_ = tuple((normalize(c), m) for c, m in d.children)
        if not children_:
            return base
        if (len(children_) == 1 and isinstance(base, Seg)
                and isinstance(children_[0][0], Seg)
                and children_[0][1] == Card.fin(1)):
            return Seg(add(add(base.eta, ONE), children_[0][0].eta))
        return Graft(base, children_)
    if isinstance(d, TildeOf):
        inner = normalize(d.inner)
        if isinstance(inner, HatOf):
            return normalize(inner.inner)
        if not unc_sites(inner):
            return inner
        if isinstance(inner, Seg) and inner.eta.cof() is not Cofinality.OMEGA1:
            return Seg(tilde_shift(inner.eta))
        return TildeOf(inner)
    if isinstance(d, HatOf):
        inner = normalize(d.inner)
        if not unc_sites(inner) and not view(inner).gaps():
            return inner
        if isinstance(inner, Seg):
            return Seg(hat_shift(inner.eta))
        return HatOf(inner)
    return d


def is_r1_tree(d):
    return _r_flags(d)[1]


def _r_flags(d):
    sites = unc_sites(d)
    is_r = all(s.ims.is_finite for s in sites)
    is_r1 = all(s.ims.is_finite and s.ims.n <= 1 for s in sites)
    return is_r, is_r1


# -- structural isomorphism (normal forms plus node-level spot checks) -------------

_SPOT_HEIGHT_SAMPLES = 5


def _spot_addresses(d):
    """A panel of resolvable addresses of d covering the structural regions,
    every uncountable-cofinality site included."""
    out = [()]
    v = view(d)
    try:
        out.append(v.leftmost_top().address())
    except Exception:
        pass
    for s in unc_sites(d):
        out.append(node_at(d, s.parts).address())
    rng_nodes = []
    try:
        root = resolve(d, ())
        frontier = [root]
        for _ in range(6):
            nxt = []
            for n in frontier:
                for c in children(d, n, 2):
                    rng_nodes.append(c)
                    nxt.append(c)
            frontier = nxt[:3]
        out.extend(n.address() for n in rng_nodes[:6])
    except Exception:
        pass
    seen, uniq = set(), []
    for a in out:
        if a not in seen:
            seen.add(a)
            uniq.append(a)
    return uniq


def _node_data_match(a, b):
    return cmp(a.ht, b.ht) == 0 and a.cof is b.cof and a.ims == b.ims \
        and a.maximal == b.maximal


def _site_summary(d):
    return sorted((str(s.ht), str(s.ims), s.maximal) for s in unc_sites(d))


def iso_check(d1, d2, translate=None):
    """Structural equality of normal forms plus spot agreement of node data.

    With ``translate`` the check runs through the given address map instead.
    This is a sound isomorphism check for the round-trip shapes it is used
    on, not a general tree-isomorphism decision."""
    if cmp(height(d1), height(d2)) != 0:
        return False
    if translate is not None:
        for addr in _spot_addresses(d1):
            try:
                a = resolve(d1, addr)
            except Exception:
                continue
            try:
                b = resolve(d2, translate(addr))
            except Exception:
                return False
            if not _node_data_match(a, b):
                return False
        return True
    return normalize(d1) == normalize(d2) and _site_summary(d1) == _site_summary(d2)


@dataclass(frozen=True)
class RoundTrip:
    tilde_hat_ok: bool
    hat_tilde_ok: bool
    is_r1: bool


def roundtrip_check(d):
    """tilde(hat(d)) recovers d always; hat(tilde(d)) recovers d exactly on
    trees whose uncountable-cofinality nodes have at most one successor."""
    structure_ok(d)
    th = TildeOf(HatOf(d))
    ident = lambda a: a  # removing the split points restores original addresses
    tilde_hat_ok = iso_check(th, d) and \
        iso_check(th, d, translate=ident) and iso_check(d, th, translate=ident)
    _, r1 = _r_flags(d)
    ht_ = HatOf(TildeOf(d))
    if not r1:
        hat_tilde_ok = False
        if cmp(height(ht_), height(d)) == 0:
            hat_tilde_ok = _hat_tilde_spot_iso(d, ht_)
    else:
        hat_tilde_ok = _hat_tilde_spot_iso(d, ht_)
    return RoundTrip(tilde_hat_ok, hat_tilde_ok, r1)


def _hat_tilde_translate(d):
    """Candidate address translation d -> hat(tilde(d)) for r1 trees."""
    def translate(addr):
        node = resolve(d, addr)
        if node.cof is not Cofinality.OMEGA1:
            return addr
        if node.maximal:
            return addr  # the completion point carries the same address
        kid = children(d, node, 2)
        if len(kid) != 1:
            raise UndecidableTailPattern("not an r1 position")
        return kid[0].address() + (Below(),)
    return translate


def _hat_tilde_spot_iso(d, ht_):
    try:
        translate = _hat_tilde_translate(d)
        return iso_check(d, ht_, translate=translate)
    except Exception:
        return False


# -- disjoint closures in the hat compactification -----------------------------------

@dataclass(frozen=True)
class DisjointVerdict:
    kind: str                 # "disjoint" | "meet"
    at: object = None         # split-point address when kind == "meet"
    accumulation_a: tuple = ()
    accumulation_b: tuple = ()

    def to_json(self):
        out = {"kind": "disjoint-closures", "verdict": self.kind,
               "verified": True}
        if self.at is not None:
            from .dsl import print_address
            out["at"] = print_address(self.at)
        return out


def _sigma_closed_check(d, spec, name):
    """Raise NotClosed with an escaping convergent sequence when a template
    limit point is missing from the set."""
    for part in spec_parts(spec):
        if isinstance(part, (Explicit, Branch, ConeSet)):
            continue  # closed as they stand (cones and branches are clopen-ish)
        if isinstance(part, OmegaFamily):
            limits = _omega_limits(d, part)
        else:
            limits = _club_limits(d, part)
        for x in limits:
            if not contains(d, spec, x):
                try:
                    seq = fu_extract(d, spec, x)
                except Exception as exc:
                    raise UndecidableTailPattern(
                        "cannot certify closedness of %s at %r" % (name, x)) from exc
                raise NotClosed(
                    "%s is not closed in the countably coarse wedge topology" % name,
                    which=name, witness=(seq, x.address()))


def _omega_limits(d, part):
    """Limit candidates of an omega-indexed family: the supremum of the
    varying run, or the common parent for an index-slot family."""
    series = _series_of(d, part)
    if series.constant:
        return []
    slot = series.slot
    if slot.kind in ("copy", "letter"):
        parts = series.parts[:slot.comp]
        if slot.kind == "letter" and slot.run and slot.run > 0:
            runs = series.parts[slot.comp][1][:slot.run]
            parts = parts + (("runs", runs),)
        return [node_at(d, parts)]
    if slot.kind == "count":
        sup = slot.sup()
        runs = list(series.parts[slot.comp][1][:slot.run])
        letter = series.parts[slot.comp][1][slot.run][0]
        runs.append((letter, sup))
        parts = series.parts[:slot.comp] + (("runs", tuple(runs)),)
        try:
            return [node_at(d, parts)]
        except Exception:
            return []
    if slot.kind == "up":
        parts = series.parts[:slot.comp] + (("up", slot.sup()),)
        try:
            return [node_at(d, parts)]
        except Exception:
            return []
    return []


def _club_limits(d, part):
    """Countable-limit-parameter instantiations of a club family whose
    trailing steps vanish in the limit."""
    from .ordinals import OMEGA, times_nat
    series = _series_of(d, part)
    if series.constant:
        return []
    out = []
    for lam in (OMEGA, times_nat(OMEGA, 2)):
        if cmp(lam, series.bound) >= 0:
            continue
        slot = series.slot
        if slot.kind != "count":
            continue
        runs = list(series.parts[slot.comp][1][:slot.run])
        letter = series.parts[slot.comp][1][slot.run][0]
        runs.append((letter, slot.value(lam)))
        # the limit of s_alpha as alpha -> lam drops everything past the slot
        parts = series.parts[:slot.comp] + (("runs", tuple(runs)),)
        try:
            out.append(node_at(d, parts))
        except Exception:
            pass
    return out


def _accumulating_split_points(d, spec):
    """Split points s(t) where the set accumulates in hat(d): explicit
    uncountable-cofinality nodes with cofinal meets, plus whole cones (a cone
    accumulates at s(u) for every uncountable-cofinality u above its base)."""
    out = {}
    cones = []
    for part in spec_parts(spec):
        if isinstance(part, Branch):
            top = resolve(d, part.top) if not isinstance(part.top, Node) else part.top
            for site_ht in _unc_heights_upto(d, top.ht):
                t = ancestor_at(d, top, site_ht)
                out[t.parts] = t
        elif isinstance(part, ClubFamily):
            series = _series_of(d, part)
            anchor = resolve(d, part.anchor)
            for site_ht in _unc_heights_upto(d, anchor.ht):
                t = ancestor_at(d, anchor, site_ht)
                kind, sup = series.meet_profile_with(t)
                if kind == "increasing" and cmp(sup, t.ht) == 0:
                    out[t.parts] = t
        elif isinstance(part, ConeSet):
            cones.append(resolve(d, part.t))
        # omega families and explicit sets have countable meet suprema and
        # never reach an uncountable-cofinality point
    return out, cones


def _unc_heights_upto(d, h):
    from .ordinals import Ordinal
    return [Ordinal(j, ()) for j in range(1, h.omega1 + 1)
            if cmp(Ordinal(j, ()), h) <= 0]


def disjoint_closures(d, A, B):
    """Decide whether two disjoint closed subsets of the countably coarse
    wedge space keep disjoint closures in the hat compactification.

    Closedness is checked by hunting for escaping convergent sequences; a
    meeting point, were it to exist, must be a split point s(t), detected via
    cofinal meets below t."""
    validate(d)
    _sigma_closed_check(d, A, "A")
    _sigma_closed_check(d, B, "B")
    for x in sample_members(d, A, 5):
        if contains(d, B, x):
            raise PreconditionFailed("A and B share the point %r" % (x,))
    for x in sample_members(d, B, 5):
        if contains(d, A, x):
            raise PreconditionFailed("A and B share the point %r" % (x,))
    acc_a, cones_a = _accumulating_split_points(d, A)
    acc_b, cones_b = _accumulating_split_points(d, B)
    common = set(acc_a) & set(acc_b)
    for base in cones_a:
        for u in acc_b.values():
            if leq_parts(base.parts, u.parts):
                common.add(u.parts)
                acc_a[u.parts] = u
    for base in cones_b:
        for u in acc_a.values():
            if leq_parts(base.parts, u.parts):
                common.add(u.parts)
    for ba in cones_a:
        for bb in cones_b:
            if leq_parts(ba.parts, bb.parts) or leq_parts(bb.parts, ba.parts):
                raise UndecidableTailPattern(
                    "comparable cones share their whole upper accumulation")
    if common:
        t = acc_a[min(common, key=str)]
        return DisjointVerdict("meet", at=t.address() + (Below(),),
                               accumulation_a=tuple(sorted(map(str, acc_a))),
                               accumulation_b=tuple(sorted(map(str, acc_b))))
    return DisjointVerdict("disjoint",
                           accumulation_a=tuple(sorted(map(str, acc_a))),
                           accumulation_b=tuple(sorted(map(str, acc_b))))
