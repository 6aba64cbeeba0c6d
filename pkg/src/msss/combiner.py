"""Combiner side: verify contributions, unmask, interpolate, and check the
recovered secret against the published tag.

Contribution checking runs before any unmasking, so a bad value surfaces
as BadContribution naming the offending participant instead of as garbage
output. The check is exact, not statistical: raising to h0 is injective on
units mod n, so any tampered unit value fails it.
"""

from __future__ import annotations

from typing import Iterable, Mapping

from . import codec
from .dealer import PublicParams, SecretPackage
from .errors import (
    BadContribution,
    ExtraContribution,
    MissingContribution,
    UnknownParticipant,
    UnmaskOutOfField,
)
from .linepoly import interpolate_line
from .numtheory import mod_exp
from .participant import Contribution


def verify_contribution(
    params: PublicParams, package: SecretPackage, ps: int, contribution: Contribution
) -> bool:
    """Public check that x was honestly derived from the share behind ps.

    An honest x = ps0**s satisfies x**h0 = g**(s0*h0*s) = g**s = ps mod n.
    Values outside [0, n) are rejected outright: the honest value is reduced,
    so an unreduced congruent one is a forgery, not an equivalent encoding.
    """
    if not 0 <= contribution.x < params.n:
        return False
    return mod_exp(contribution.x, package.h0, params.n) == ps


def reconstruct(
    params: PublicParams,
    package: SecretPackage,
    set_index: int,
    contributions: Iterable[Contribution],
    roster: Mapping[str, int],
) -> int:
    """Recover the secret for one qualified set from its members' values.

    Needs exactly one contribution per member of the designated set, each
    bound to this package and set index; anything else raises
    MissingContribution or ExtraContribution. Every contribution is
    verified first (BadContribution names the cheater). UnmaskOutOfField
    means the unmasked value is not a field element, which with verified
    inputs certifies corrupted public data or a wrong coalition.

    The caller should still confirm the result with verify_secret.
    """
    contributions = list(contributions)
    entry = package.entry(set_index)
    seen: set[str] = set()
    for c in contributions:
        if c.secret_id != package.secret_id or c.set_index != set_index:
            raise ExtraContribution(
                f"contribution from {c.pid} is bound to {c.secret_id} set {c.set_index}, "
                f"not {package.secret_id} set {set_index}"
            )
        if c.pid not in entry.members:
            raise ExtraContribution(f"{c.pid} is not a member of set {set_index}")
        if c.pid in seen:
            raise ExtraContribution(f"duplicate contribution from {c.pid}")
        seen.add(c.pid)
    missing = entry.members - seen
    if missing:
        raise MissingContribution("missing contributions from: " + ", ".join(sorted(missing)))
    for c in sorted(contributions, key=lambda c: c.pid):
        if c.pid not in roster:
            raise UnknownParticipant(f"{c.pid} has no pseudo-share on the board")
        if not verify_contribution(params, package, roster[c.pid], c):
            raise BadContribution(c.pid)
    unmasked = codec.xor_combine(entry.masked, [c.x for c in contributions], params.width)
    if unmasked >= params.m:
        raise UnmaskOutOfField(
            f"unmasked value {unmasked} is not in Z_{params.m}: "
            "public data corrupt or wrong coalition"
        )
    line = interpolate_line((1, package.f1), (entry.d, unmasked), params.m)
    return line.secret


def verify_secret(package: SecretPackage, set_index: int, recovered: int, width: int) -> bool:
    """Check a recovered value against the published tag for that set."""
    entry = package.entry(set_index)
    if recovered < 0 or recovered.bit_length() > 8 * width:
        return False
    return codec.tag(recovered, entry.d, width) == entry.tag


def peer_reconstruct(
    params: PublicParams,
    package: SecretPackage,
    set_index: int,
    contributions: Iterable[Contribution],
    roster: Mapping[str, int],
) -> int:
    """Combiner-less mode: after exchanging contributions, every member runs
    this locally and obtains the secret without a designated third party.

    Same contract as reconstruct; the separate name exists so session
    harnesses can label who computed what.
    """
    return reconstruct(params, package, set_index, contributions, roster)
