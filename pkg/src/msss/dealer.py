"""Dealer side of the protocol: one-time setup, per-secret publication, and
the dynamic updates (renew a secret, add or remove a qualified set, remove
a participant).

The dealer owns the factorization of n and phi(n), plus one private record
per shared secret. That record keeps the exponent s0, the line slope, and
the secret itself: without them the dealer could never extend an existing
package with a new qualified set. Everything a dealer operation returns is
public and meant for the bulletin; nothing private ever appears in a
SecretPackage.

Randomized operations accept ``force_*`` keyword hooks so tests can pin
the drawn values exactly; production callers leave them unset.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping

from . import codec
from .accessstruct import AccessStructure, ParticipantId
from .errors import (
    EmptySet,
    EmptyStructure,
    IndexOutOfRange,
    LastEntry,
    NotAntichain,
    SecretTooLarge,
    StructureBecameEmpty,
    UnknownParticipant,
    UnknownSecret,
)
from .linepoly import LinePoly
from .numtheory import ceil_sqrt, gcd, gen_prime, is_probable_prime, mod_inv, next_prime

_default_rng = random.SystemRandom()

Roster = Mapping[ParticipantId, int]


@dataclass(frozen=True)
class PublicParams:
    """The published triple (g, n, m) plus the derived byte width for masks."""

    g: int
    n: int
    m: int
    width: int


@dataclass(frozen=True)
class PackageEntry:
    """Public data letting one qualified set recover the secret.

    ``masked`` is f(d) XORed with every member's mask ps_k**s0 mod n; only
    the members can strip those masks. ``tag`` binds (secret, d) so the
    recovered value can be checked by anyone.
    """

    members: frozenset[ParticipantId]
    d: int
    masked: int
    tag: bytes


@dataclass(frozen=True)
class SecretPackage:
    """Everything the bulletin publishes for one shared secret."""

    secret_id: str
    ps0: int  # g**s0 mod n
    h0: int  # inverse of s0 modulo phi(n); the exponent for contribution checks
    f1: int  # f(1), the public point of the sharing line
    entries: tuple[PackageEntry, ...]

    @property
    def set_count(self) -> int:
        return len(self.entries)

    def entry(self, set_index: int) -> PackageEntry:
        """1-based accessor, matching the published numbering of the sets."""
        if not 1 <= set_index <= len(self.entries):
            raise IndexOutOfRange(
                f"set index {set_index} outside 1..{len(self.entries)} for {self.secret_id}"
            )
        return self.entries[set_index - 1]

    def structure(self) -> AccessStructure:
        return AccessStructure(tuple(e.members for e in self.entries))


@dataclass
class DealerSecretRecord:
    """Private per-secret state; required for the dynamic updates."""

    s0: int
    slope: int
    secret: int
    package: SecretPackage


@dataclass
class DealerState:
    """Private dealer state. Never published, never sent to participants."""

    p: int
    q: int
    phi: int
    records: dict[str, DealerSecretRecord] = field(default_factory=dict)
    next_index: int = 1


def setup(
    bits_per_prime: int,
    rng: random.Random | None = None,
    *,
    force_primes: tuple[int, int] | None = None,
    force_g: int | None = None,
) -> tuple[PublicParams, DealerState]:
    """Generate system parameters and fresh private dealer state.

    n = p*q for two distinct primes of ``bits_per_prime`` bits each; g is
    drawn from [ceil(sqrt(n)), n] and resampled until it shares no factor
    with n (which in particular rules out p and q); m is the smallest prime
    above n, keeping the mask width minimal.
    """
    if bits_per_prime < 4:
        raise ValueError(f"bits_per_prime must be >= 4, got {bits_per_prime}")
    rng = rng or _default_rng
    if force_primes is not None:
        p, q = force_primes
        for v in (p, q):
            if not is_probable_prime(v, rng):
                raise ValueError(f"forced factor {v} is not prime")
        if p == q:
            raise ValueError("the two prime factors must differ")
    else:
        p = gen_prime(bits_per_prime, rng)
        q = gen_prime(bits_per_prime, rng)
        while q == p:
            q = gen_prime(bits_per_prime, rng)
    n = p * q
    phi = (p - 1) * (q - 1)
    lo = ceil_sqrt(n)
    if force_g is not None:
        g = force_g
        if not lo <= g <= n or gcd(g, n) != 1:
            raise ValueError(f"forced g {g} invalid: need sqrt(n) <= g <= n and gcd(g, n) = 1")
    else:
        while True:
            g = rng.randrange(lo, n + 1)
            if gcd(g, n) == 1:
                break
    m = next_prime(n, rng)
    params = PublicParams(g=g, n=n, m=m, width=codec.mask_width(m))
    return params, DealerState(p=p, q=q, phi=phi)


def _sample_s0(phi: int, n: int, rng) -> int:
    while True:
        s0 = rng.randrange(2, n + 1)
        if gcd(s0, phi) == 1:
            return s0


def _sample_d(count: int, m: int, rng, exclude: Iterable[int] = ()) -> list[int]:
    taken = set(exclude)
    out: list[int] = []
    while len(out) < count:
        d = rng.randrange(2, m)
        if d not in taken:
            taken.add(d)
            out.append(d)
    return out


def _check_enrolled(members: Iterable[ParticipantId], roster: Roster) -> None:
    for pid in sorted(members):
        if pid not in roster:
            raise UnknownParticipant(f"{pid} is not enrolled")


def _publish(
    params: PublicParams,
    phi: int,
    secret_id: str,
    secret: int,
    structure: AccessStructure,
    roster: Roster,
    rng,
    force_s0: int | None = None,
    force_a1: int | None = None,
    force_d: Iterable[int] | None = None,
) -> DealerSecretRecord:
    """Build a complete package plus its private record. Shared by
    share_secret, renew_secret, and remove_participant."""
    n, m, width = params.n, params.m, params.width
    if not structure.minimal_sets:
        raise EmptyStructure("cannot share under an empty access structure")
    if secret < 0:
        raise ValueError(f"secret must be non-negative, got {secret}")
    if secret >= m:
        raise SecretTooLarge(f"secret must be below m = {m}, got {secret}")
    for members in structure.minimal_sets:
        _check_enrolled(members, roster)
    if force_s0 is not None:
        if not 2 <= force_s0 <= n or gcd(force_s0, phi) != 1:
            raise ValueError("forced s0 must lie in [2, n] and be coprime to phi(n)")
        s0 = force_s0
    else:
        s0 = _sample_s0(phi, n, rng)
    h0 = mod_inv(s0, phi)
    ps0 = pow(params.g, s0, n)
    if force_a1 is not None:
        if not 1 <= force_a1 < m:
            raise ValueError("forced slope must lie in [1, m - 1]")
        slope = force_a1
    else:
        slope = rng.randrange(1, m)
    line = LinePoly(intercept=secret, slope=slope, modulus=m)
    t = structure.set_count
    if force_d is not None:
        ds = list(force_d)
        if len(ds) != t or len(set(ds)) != t or any(not 2 <= d < m for d in ds):
            raise ValueError(f"need {t} distinct forced d values in [2, m - 1]")
    else:
        ds = _sample_d(t, m, rng)
    entries = []
    for members, d in zip(structure.minimal_sets, ds):
        masks = [pow(roster[pid], s0, n) for pid in sorted(members)]
        masked = codec.xor_combine(line.eval(d), masks, width)
        entries.append(
            PackageEntry(members=members, d=d, masked=masked, tag=codec.tag(secret, d, width))
        )
    package = SecretPackage(
        secret_id=secret_id, ps0=ps0, h0=h0, f1=line.eval(1), entries=tuple(entries)
    )
    return DealerSecretRecord(s0=s0, slope=slope, secret=secret, package=package)


def _require_record(dealer: DealerState, secret_id: str) -> DealerSecretRecord:
    try:
        return dealer.records[secret_id]
    except KeyError:
        raise UnknownSecret(f"no secret {secret_id!r}") from None


def share_secret(
    dealer: DealerState,
    params: PublicParams,
    roster: Roster,
    secret: int,
    structure: AccessStructure,
    rng: random.Random | None = None,
    *,
    force_s0: int | None = None,
    force_a1: int | None = None,
    force_d: Iterable[int] | None = None,
) -> SecretPackage:
    """Publish a new secret under the given access structure.

    Draws a fresh exponent s0 coprime to phi(n), a fresh slope, and one
    fresh abscissa per qualified set; every member's mask is ps_k**s0 mod n.
    The returned package carries a newly assigned secret id.
    """
    rng = rng or _default_rng
    secret_id = f"s{dealer.next_index}"
    record = _publish(
        params, dealer.phi, secret_id, secret, structure, roster, rng, force_s0, force_a1, force_d
    )
    dealer.next_index += 1
    dealer.records[secret_id] = record
    return record.package


def renew_secret(
    dealer: DealerState,
    params: PublicParams,
    roster: Roster,
    secret_id: str,
    new_secret: int,
    rng: random.Random | None = None,
    *,
    force_s0: int | None = None,
    force_a1: int | None = None,
    force_d: Iterable[int] | None = None,
) -> SecretPackage:
    """Re-share an existing secret id under its current structure.

    A full re-publication: fresh s0, slope, abscissas, masks and tags, even
    when the new secret equals the old one. Other packages are untouched.
    """
    rng = rng or _default_rng
    record = _require_record(dealer, secret_id)
    structure = record.package.structure()
    fresh = _publish(
        params, dealer.phi, secret_id, new_secret, structure, roster, rng,
        force_s0, force_a1, force_d,
    )
    dealer.records[secret_id] = fresh
    return fresh.package


def add_qualified_set(
    dealer: DealerState,
    params: PublicParams,
    roster: Roster,
    secret_id: str,
    new_set: Iterable[ParticipantId],
    rng: random.Random | None = None,
    *,
    force_d: int | None = None,
) -> SecretPackage:
    """Grant one more qualified set access to an already-shared secret.

    Reuses the retained (s0, slope, secret) so existing entries stay valid,
    and keeps the published structure a minimal antichain: a new set that
    contains an existing one is rejected as pointless, while existing sets
    that strictly contain the new one stop being minimal and are dropped.
    """
    rng = rng or _default_rng
    record = _require_record(dealer, secret_id)
    members = frozenset(new_set)
    if not members:
        raise EmptySet("the new qualified set is empty")
    _check_enrolled(members, roster)
    entries = record.package.entries
    for e in entries:
        if e.members <= members:
            detail = "duplicates" if e.members == members else "already contains"
            raise NotAntichain(
                f"{{{', '.join(sorted(members))}}} {detail} qualified set "
                f"{{{', '.join(sorted(e.members))}}}"
            )
    kept = tuple(e for e in entries if not members < e.members)
    taken = {e.d for e in entries}
    if force_d is not None:
        if not 2 <= force_d < params.m or force_d in taken:
            raise ValueError("forced d must be unused and in [2, m - 1]")
        d = force_d
    else:
        d = _sample_d(1, params.m, rng, exclude=taken)[0]
    line = LinePoly(intercept=record.secret, slope=record.slope, modulus=params.m)
    masks = [pow(roster[pid], record.s0, params.n) for pid in sorted(members)]
    masked = codec.xor_combine(line.eval(d), masks, params.width)
    entry = PackageEntry(
        members=members, d=d, masked=masked, tag=codec.tag(record.secret, d, params.width)
    )
    package = replace(record.package, entries=kept + (entry,))
    record.package = package
    return package


def remove_qualified_set(dealer: DealerState, secret_id: str, set_index: int) -> SecretPackage:
    """Revoke one qualified set by deleting its public entry (1-based index)."""
    record = _require_record(dealer, secret_id)
    entries = record.package.entries
    if not 1 <= set_index <= len(entries):
        raise IndexOutOfRange(f"set index {set_index} outside 1..{len(entries)} for {secret_id}")
    if len(entries) == 1:
        raise LastEntry(f"{secret_id} must keep at least one qualified set")
    package = replace(record.package, entries=entries[: set_index - 1] + entries[set_index:])
    record.package = package
    return package


def remove_participant(
    dealer: DealerState,
    params: PublicParams,
    roster: dict[ParticipantId, int],
    pid: ParticipantId,
    rng: random.Random | None = None,
) -> list[SecretPackage]:
    """Drop a participant entirely.

    Every qualified set naming them is deleted, every secret whose structure
    mentioned them is renewed with fresh randomness (the old masks would
    still be strippable by the leaver), and the roster shrinks in place.
    Returns the renewed packages; secrets that never mentioned the
    participant are left bit-identical.

    Raises StructureBecameEmpty, changing nothing, if some secret would
    lose its last qualified set; remove those secrets first.
    """
    rng = rng or _default_rng
    if pid not in roster:
        raise UnknownParticipant(f"{pid} is not enrolled")
    plans: dict[str, list[frozenset[ParticipantId]]] = {}
    emptied = []
    for sid, record in dealer.records.items():
        sets = [e.members for e in record.package.entries]
        if not any(pid in members for members in sets):
            continue
        kept = [members for members in sets if pid not in members]
        if not kept:
            emptied.append(sid)
        plans[sid] = kept
    if emptied:
        raise StructureBecameEmpty(emptied)
    del roster[pid]
    renewed = []
    for sid, kept in plans.items():
        record = dealer.records[sid]
        structure = AccessStructure(tuple(kept))
        fresh = _publish(params, dealer.phi, sid, record.secret, structure, roster, rng)
        dealer.records[sid] = fresh
        renewed.append(fresh.package)
    return renewed
