"""In-memory multi-party deployments, for the ``simulate`` command and for
stress testing.

One run builds a whole deployment (setup, enrollment, random access
structures, sharing), replays a reconstruction session for every qualified
set of every secret, probes unauthorized coalitions with the best attack
available to them, and optionally makes members cheat. The report contains
no wall-clock values, so a fixed seed gives a byte-identical report.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import asdict, dataclass

from . import codec, combiner, dealer, participant
from .accessstruct import AccessStructure
from .linepoly import interpolate_line
from .numtheory import gcd

_default_rng = random.SystemRandom()


@dataclass(frozen=True)
class SimulationConfig:
    participants: int
    secrets: int
    bits_per_prime: int = 16
    max_minimal_sets: int = 4
    max_set_size: int = 4
    cheaters_per_session: int = 0
    unauthorized_probes: int = 2
    seed: int | None = None

    def validate(self) -> None:
        if self.participants < 1:
            raise ValueError("need at least one participant")
        if self.secrets < 1:
            raise ValueError("need at least one secret")
        if self.bits_per_prime < 4:
            raise ValueError("bits_per_prime must be >= 4")
        if self.max_minimal_sets < 1 or self.max_set_size < 1:
            raise ValueError("structure bounds must be positive")
        if self.cheaters_per_session < 0 or self.unauthorized_probes < 0:
            raise ValueError("counts must be non-negative")


def random_antichain(rng, pids, max_sets: int, max_set_size: int) -> AccessStructure:
    """A random antichain of 1..max_sets minimal sets over the given ids."""
    pool = sorted(pids)
    target = rng.randint(1, max_sets)
    sets: list[frozenset[str]] = []
    attempts = 0
    while len(sets) < target and attempts < 50:
        attempts += 1
        size = rng.randint(1, min(max_set_size, len(pool)))
        candidate = frozenset(rng.sample(pool, size))
        if any(candidate <= s or s <= candidate for s in sets):
            continue
        sets.append(candidate)
    return AccessStructure(tuple(sets))


def attack_entry(params, package, set_index: int, xs) -> tuple[bool, int | None]:
    """What a coalition can do with one entry and whatever x values it has:
    XOR them into the masked value, interpolate, and hope the tag matches.

    Returns (tag accepted, recovered value or None).
    """
    entry = package.entry(set_index)
    guess = codec.xor_combine(entry.masked, xs, params.width)
    if guess >= params.m:
        return False, None
    value = interpolate_line((1, package.f1), (entry.d, guess), params.m).secret
    return combiner.verify_secret(package, set_index, value, params.width), value


def _corrupt(rng, honest_x: int, n: int) -> int:
    """A unit mod n different from the honest contribution."""
    while True:
        candidate = rng.randrange(1, n)
        if candidate != honest_x and gcd(candidate, n) == 1:
            return candidate


def _non_covering_coalition(rng, pids, minimal_sets, attempts: int = 30):
    """A random coalition containing no minimal set, if one can be found."""
    pool = sorted(pids)
    for _ in range(attempts):
        size = rng.randint(1, max(1, len(pool) - 1))
        candidate = frozenset(rng.sample(pool, size))
        if not any(s <= candidate for s in minimal_sets):
            return candidate
    return None


def run_simulation(config: SimulationConfig) -> dict:
    """Build one deployment and exercise it end to end; returns the report."""
    config.validate()
    rng = random.Random(config.seed) if config.seed is not None else _default_rng

    params, state = dealer.setup(config.bits_per_prime, rng)
    pids = [f"P{i}" for i in range(1, config.participants + 1)]
    keys = {pid: participant.keygen(params, pid, rng) for pid in pids}
    roster = {pid: keys[pid].ps for pid in pids}

    packages: dict[str, dealer.SecretPackage] = {}
    secrets: dict[str, int] = {}
    for _ in range(config.secrets):
        structure = random_antichain(rng, pids, config.max_minimal_sets, config.max_set_size)
        value = rng.randrange(0, params.m)
        pkg = dealer.share_secret(state, params, roster, value, structure, rng)
        packages[pkg.secret_id] = pkg
        secrets[pkg.secret_id] = value

    sessions = []
    probes = []
    for sid, pkg in packages.items():
        for j in range(1, pkg.set_count + 1):
            members = sorted(pkg.entry(j).members)
            contribs = {
                pid: participant.contribute(params, keys[pid], pkg, j) for pid in members
            }
            cheaters = []
            if config.cheaters_per_session:
                for pid in rng.sample(members, min(config.cheaters_per_session, len(members))):
                    cheaters.append(pid)
                    contribs[pid] = participant.Contribution(
                        pid=pid,
                        secret_id=sid,
                        set_index=j,
                        x=_corrupt(rng, contribs[pid].x, params.n),
                    )
            detected = [
                pid
                for pid in members
                if not combiner.verify_contribution(params, pkg, roster[pid], contribs[pid])
            ]
            session = {
                "secret_id": sid,
                "set_index": j,
                "members": members,
                "cheaters_injected": sorted(cheaters),
                "cheaters_detected": detected,
            }
            if detected:
                session["outcome"] = "cheater-detected"
                session["tag"] = None
            else:
                got = combiner.reconstruct(params, pkg, j, list(contribs.values()), roster)
                tag_ok = combiner.verify_secret(pkg, j, got, params.width)
                session["outcome"] = "recovered" if got == secrets[sid] else "wrong-secret"
                session["tag"] = "ok" if tag_ok else "mismatch"
            sessions.append(session)

            # every strict subset of the qualified set tries its luck
            for size in range(1, len(members)):
                for subset in itertools.combinations(members, size):
                    xs = [contribs[pid].x for pid in subset if pid not in cheaters]
                    xs += [
                        participant.contribute(params, keys[pid], pkg, j).x
                        for pid in subset
                        if pid in cheaters
                    ]
                    accepted, _ = attack_entry(params, pkg, j, xs)
                    probes.append(
                        {
                            "secret_id": sid,
                            "set_index": j,
                            "coalition": list(subset),
                            "kind": "strict-subset",
                            "accepted": accepted,
                        }
                    )

        minimal_sets = [e.members for e in pkg.entries]
        for _ in range(config.unauthorized_probes):
            coalition = _non_covering_coalition(rng, pids, minimal_sets)
            if coalition is None:
                break
            for j in range(1, pkg.set_count + 1):
                xs = [
                    pow(pkg.ps0, keys[pid].s, params.n) for pid in sorted(coalition)
                ]
                accepted, _ = attack_entry(params, pkg, j, xs)
                probes.append(
                    {
                        "secret_id": sid,
                        "set_index": j,
                        "coalition": sorted(coalition),
                        "kind": "non-covering",
                        "accepted": accepted,
                    }
                )

    report = {
        "config": asdict(config),
        "params": {
            "n_bits": params.n.bit_length(),
            "m_bits": params.m.bit_length(),
            "width": params.width,
            "max_share_bits": max(k.s.bit_length() for k in keys.values()),
        },
        "sessions": sessions,
        "unauthorized": probes,
        "summary": {
            "sessions": len(sessions),
            "recovered": sum(s["outcome"] == "recovered" for s in sessions),
            "tag_ok": sum(s["tag"] == "ok" for s in sessions),
            "cheater_sessions": sum(bool(s["cheaters_injected"]) for s in sessions),
            "cheaters_missed": sum(
                s["cheaters_detected"] != s["cheaters_injected"] for s in sessions
            ),
            "unauthorized_probes": len(probes),
            "unauthorized_accepted": sum(p["accepted"] for p in probes),
        },
    }
    return report
