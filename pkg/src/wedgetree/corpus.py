"""Random description corpora for the self-test suites."""

from __future__ import annotations

from .ordinals import OMEGA, OMEGA1, ONE, ZERO, add, nat, omega_power, times_nat
from .trees import (
    CARD_OMEGA, CARD_OMEGA1, Card, Full, Graft, HatOf, OMEGA_BRANCH, Seg,
    TildeOf, children, resolve,
)

SAMPLE_ORDINALS = [
    ZERO, ONE, nat(2), nat(5), OMEGA, add(OMEGA, ONE), add(OMEGA, nat(3)),
    times_nat(OMEGA, 2), omega_power(nat(2)),
    add(add(omega_power(nat(2)), OMEGA), nat(2)), OMEGA1, add(OMEGA1, ONE),
    add(OMEGA1, OMEGA), add(add(OMEGA1, OMEGA), nat(4)), times_nat(OMEGA1, 2),
    add(times_nat(OMEGA1, 2), ONE),
]


def random_description(rng, depth=2, allow_wrappers=True):
    """A random description; chain complete except for rare tilde shapes the
    caller filters with validate()."""
    choices = ["seg", "full"]
    if depth > 0:
        choices += ["graft", "graft"]
        if allow_wrappers:
            choices += ["hat", "tilde"]
    kind = rng.choice(choices)
    if kind == "seg":
        return Seg(rng.choice(SAMPLE_ORDINALS))
    if kind == "full":
        k = rng.choice([1, 2, 3, OMEGA_BRANCH])
        return Full(k, add(rng.choice(SAMPLE_ORDINALS), ONE))
    if kind == "graft":
        base = random_description(rng, 0, False)
        children_ = []
        for _ in range(rng.randint(1, 2)):
            mult = rng.choice([Card.fin(1), Card.fin(3), CARD_OMEGA, CARD_OMEGA1])
            children_.append((random_description(rng, depth - 1, False), mult))
        return Graft(base, tuple(children_))
    if kind == "hat":
        return HatOf(random_description(rng, depth - 1, False))
    return TildeOf(Seg(rng.choice(
        [add(OMEGA1, ONE), add(OMEGA1, nat(5)), add(times_nat(OMEGA1, 2), nat(2))])))


def sample_nodes(d, rng, count=6):
    """A few resolvable nodes of d, root first."""
    out = [resolve(d, ())]
    frontier = [out[0]]
    for _ in range(count * 3):
        if not frontier:
            break
        node = frontier.pop(0)
        for kid in children(d, node, 3):
            out.append(kid)
            if rng.random() < 0.7:
                frontier.append(kid)
        if len(out) >= count:
            break
    return out[:count]
