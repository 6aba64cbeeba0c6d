"""Operator command line: dealer operations, participant key handling, and
reconstruction sessions against a file-backed bulletin board.

Every failure mode maps to its own exit code (success is 0, argparse usage
errors are 2); see EXIT_CODES. Reports and protocol verdicts go to stdout,
diagnostics to stderr.

Setting the MSSS_TEST_HOOKS environment variable enables extra flags that
pin internal random draws (--test-primes, --g, --s, --s0, --a, --d). They
exist for reproducing fixed test sessions and are hidden otherwise.
"""

from __future__ import annotations

import argparse
import contextlib
import fcntl
import json
import os
import random
import sys
import time

from . import bulletin, combiner, dealer, participant
from .accessstruct import matching_set_index, validate_minimal
from .bulletin import Board, hex_to_int, int_to_hex
from .errors import (
    BadContribution,
    BoardIOError,
    DegeneratePoints,
    DuplicateParticipant,
    EmptySet,
    EmptyStructure,
    ExtraContribution,
    IndexOutOfRange,
    InvariantViolation,
    LastEntry,
    MalformedDocument,
    MissingContribution,
    MsssError,
    NoSuchSet,
    NotAMember,
    NotAntichain,
    NotInvertible,
    SecretTooLarge,
    StructureBecameEmpty,
    UnknownParticipant,
    UnknownSecret,
    UnmaskOutOfField,
)
from .simulate import SimulationConfig, run_simulation

EXIT_FILE_EXISTS = 3
EXIT_TAG_MISMATCH = 16
EXIT_BAD_PARAMETER = 25

EXIT_CODES = {
    DuplicateParticipant: 4,
    SecretTooLarge: 5,
    NotAntichain: 6,
    UnknownParticipant: 7,
    UnknownSecret: 8,
    NotAMember: 9,
    IndexOutOfRange: 10,
    LastEntry: 11,
    StructureBecameEmpty: 12,
    MissingContribution: 13,
    ExtraContribution: 14,
    BadContribution: 15,
    UnmaskOutOfField: 17,
    MalformedDocument: 18,
    InvariantViolation: 19,
    EmptyStructure: 20,
    EmptySet: 21,
    NotInvertible: 22,
    DegeneratePoints: 23,
    BoardIOError: 24,
    NoSuchSet: 26,
}


def _exit_code(exc: MsssError) -> int:
    for klass in type(exc).__mro__:
        if klass in EXIT_CODES:
            return EXIT_CODES[klass]
    return 1


def _parse_int(text: str) -> int:
    t = text.strip().lower().replace("_", "")
    try:
        return int(t[2:], 16) if t.startswith("0x") else int(t, 10)
    except ValueError:
        raise ValueError(f"not an integer: {text!r}") from None


def _parse_sets(text: str):
    """'A,B|B,C' -> validated access structure with two minimal sets."""
    groups = text.split("|")
    return validate_minimal(
        [[pid.strip() for pid in group.split(",") if pid.strip()] for group in groups]
    )


def _parse_members(text: str) -> frozenset[str]:
    return frozenset(pid.strip() for pid in text.split(",") if pid.strip())


def _rng(args):
    seed = getattr(args, "seed", None)
    return random.Random(seed) if seed is not None else random.SystemRandom()


def _refuse_existing(path: str, force: bool) -> bool:
    if os.path.exists(path) and not force:
        print(f"error: {path} already exists (use --force to replace it)", file=sys.stderr)
        return True
    return False


@contextlib.contextmanager
def _board_lock(path: str):
    """Advisory exclusive lock serializing dealer writes to one board."""
    lock_path = os.fspath(path) + ".lock"
    try:
        fh = open(lock_path, "w")
    except OSError as exc:
        raise BoardIOError(f"cannot lock {lock_path}: {exc}") from exc
    with fh:
        fcntl.flock(fh, fcntl.LOCK_EX)
        try:
            yield
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)


def _write_json(obj, path: str) -> None:
    tmp = os.fspath(path) + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2)
            fh.write("\n")
        os.replace(tmp, path)
    except OSError as exc:
        raise BoardIOError(f"cannot write {path}: {exc}") from exc


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise BoardIOError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{path}: not valid JSON: {exc}") from exc


def _save_dealer(state: dealer.DealerState, path: str) -> None:
    obj = {
        "p": int_to_hex(state.p),
        "q": int_to_hex(state.q),
        "phi": int_to_hex(state.phi),
        "next_index": state.next_index,
        "records": {
            sid: {
                "s0": int_to_hex(r.s0),
                "slope": int_to_hex(r.slope),
                "secret": int_to_hex(r.secret),
                "package": bulletin.package_to_obj(r.package),
            }
            for sid, r in state.records.items()
        },
    }
    _write_json(obj, path)


def _load_dealer(path: str) -> dealer.DealerState:
    obj = _read_json(path)
    try:
        records = {
            sid: dealer.DealerSecretRecord(
                s0=hex_to_int(raw["s0"], f"record {sid} s0"),
                slope=hex_to_int(raw["slope"], f"record {sid} slope"),
                secret=hex_to_int(raw["secret"], f"record {sid} secret"),
                package=bulletin.package_from_obj(sid, raw["package"], f"record {sid}"),
            )
            for sid, raw in obj["records"].items()
        }
        return dealer.DealerState(
            p=hex_to_int(obj["p"], "dealer p"),
            q=hex_to_int(obj["q"], "dealer q"),
            phi=hex_to_int(obj["phi"], "dealer phi"),
            records=records,
            next_index=int(obj["next_index"]),
        )
    except (KeyError, TypeError) as exc:
        raise MalformedDocument(f"{path}: bad dealer state: {exc}") from exc


def _load_key(path: str) -> participant.ParticipantKey:
    obj = _read_json(path)
    try:
        return participant.ParticipantKey(
            pid=obj["id"],
            s=hex_to_int(obj["s"], "key s"),
            ps=hex_to_int(obj["ps"], "key ps"),
        )
    except (KeyError, TypeError) as exc:
        raise MalformedDocument(f"{path}: bad key file: {exc}") from exc


def _load_contribution(path: str) -> participant.Contribution:
    obj = _read_json(path)
    try:
        return participant.Contribution(
            pid=obj["pid"],
            secret_id=obj["secret_id"],
            set_index=int(obj["set_index"]),
            x=hex_to_int(obj["x"], "contribution x"),
        )
    except (KeyError, TypeError) as exc:
        raise MalformedDocument(f"{path}: bad contribution file: {exc}") from exc


def _secret_value(args) -> int:
    if getattr(args, "secret_text", None) is not None:
        return int.from_bytes(args.secret_text.encode("utf-8"), "big")
    return _parse_int(args.secret)


def _resolve_set_index(package: dealer.SecretPackage, set_arg: str) -> int:
    members = _parse_members(set_arg)
    j = matching_set_index(package.structure(), members)
    if j is None:
        raise NoSuchSet(
            f"no qualified set of {package.secret_id} is exactly "
            f"{{{', '.join(sorted(members))}}}"
        )
    return j


def cmd_setup(args) -> int:
    if _refuse_existing(args.board, args.force) or _refuse_existing(args.dealer, args.force):
        return EXIT_FILE_EXISTS
    force_primes = None
    raw = getattr(args, "test_primes", None)
    if raw:
        p, q = (int(v) for v in raw.split(","))
        force_primes = (p, q)
    params, state = dealer.setup(
        args.bits, _rng(args), force_primes=force_primes, force_g=getattr(args, "force_g", None)
    )
    with _board_lock(args.board):
        bulletin.save(Board(params=params), args.board)
    _save_dealer(state, args.dealer)
    print(f"n = {params.n} ({params.n.bit_length()} bits)")
    print(f"m = {params.m} ({params.m.bit_length()} bits)")
    print(f"width = {params.width}")
    return 0


def cmd_enroll(args) -> int:
    if _refuse_existing(args.key_out, args.force):
        return EXIT_FILE_EXISTS
    with _board_lock(args.board):
        board = bulletin.load(args.board)
        if args.id in board.roster:
            raise DuplicateParticipant(f"{args.id} is already enrolled")
        key = participant.keygen(
            board.params, args.id, _rng(args), force_s=getattr(args, "force_s", None)
        )
        _write_json({"id": key.pid, "s": int_to_hex(key.s), "ps": int_to_hex(key.ps)}, args.key_out)
        board.roster[key.pid] = key.ps
        board.revision += 1
        bulletin.save(board, args.board)
    print(f"enrolled {key.pid}: ps = {int_to_hex(key.ps)}")
    return 0


def cmd_share(args) -> int:
    structure = _parse_sets(args.sets)
    secret = _secret_value(args)
    force_d = None
    raw = getattr(args, "force_d", None)
    if raw:
        force_d = [_parse_int(v) for v in raw.split(",")]
    with _board_lock(args.board):
        board = bulletin.load(args.board)
        state = _load_dealer(args.dealer)
        pkg = dealer.share_secret(
            state,
            board.params,
            board.roster,
            secret,
            structure,
            _rng(args),
            force_s0=getattr(args, "force_s0", None),
            force_a1=getattr(args, "force_a", None),
            force_d=force_d,
        )
        board.packages[pkg.secret_id] = pkg
        board.revision += 1
        bulletin.save(board, args.board)
        _save_dealer(state, args.dealer)
    print(pkg.secret_id)
    return 0


def cmd_contribute(args) -> int:
    if _refuse_existing(args.out, args.force):
        return EXIT_FILE_EXISTS
    board = bulletin.load(args.board)
    key = _load_key(args.key)
    if args.secret_id not in board.packages:
        raise UnknownSecret(f"no secret {args.secret_id!r} on the board")
    pkg = board.packages[args.secret_id]
    j = _resolve_set_index(pkg, args.set)
    c = participant.contribute(board.params, key, pkg, j)
    _write_json(
        {"pid": c.pid, "secret_id": c.secret_id, "set_index": c.set_index, "x": int_to_hex(c.x)},
        args.out,
    )
    print(c.x)
    return 0


def cmd_reconstruct(args) -> int:
    board = bulletin.load(args.board)
    if args.secret_id not in board.packages:
        raise UnknownSecret(f"no secret {args.secret_id!r} on the board")
    pkg = board.packages[args.secret_id]
    j = _resolve_set_index(pkg, args.set)
    contributions = [_load_contribution(path) for path in args.contribution]
    try:
        recovered = combiner.reconstruct(board.params, pkg, j, contributions, board.roster)
    except BadContribution as exc:
        print(f"cheater: {exc.pid}")
        return EXIT_CODES[BadContribution]
    print(recovered)
    if combiner.verify_secret(pkg, j, recovered, board.params.width):
        print("tag: ok")
        return 0
    print("tag: mismatch")
    return EXIT_TAG_MISMATCH


def cmd_verify(args) -> int:
    board = bulletin.load(args.board)
    if args.secret_id not in board.packages:
        raise UnknownSecret(f"no secret {args.secret_id!r} on the board")
    pkg = board.packages[args.secret_id]
    j = _resolve_set_index(pkg, args.set)
    members = pkg.entry(j).members
    bad = []
    for path in args.contribution:
        c = _load_contribution(path)
        if c.pid not in board.roster:
            raise UnknownParticipant(f"{c.pid} has no pseudo-share on the board")
        honest = (
            c.secret_id == args.secret_id
            and c.set_index == j
            and c.pid in members
            and combiner.verify_contribution(board.params, pkg, board.roster[c.pid], c)
        )
        if honest:
            print(f"ok: {c.pid}")
        else:
            print(f"cheater: {c.pid}")
            bad.append(c.pid)
    return EXIT_CODES[BadContribution] if bad else 0


def cmd_update(args) -> int:
    with _board_lock(args.board):
        board = bulletin.load(args.board)
        state = _load_dealer(args.dealer)
        renewed: list[str] = []
        if args.action == "renew":
            pkg = dealer.renew_secret(
                state, board.params, board.roster, args.secret_id, _secret_value(args), _rng(args)
            )
            board.packages[pkg.secret_id] = pkg
            renewed.append(pkg.secret_id)
        elif args.action == "add-set":
            pkg = dealer.add_qualified_set(
                state,
                board.params,
                board.roster,
                args.secret_id,
                _parse_members(args.set),
                _rng(args),
                force_d=getattr(args, "force_d", None),
            )
            board.packages[pkg.secret_id] = pkg
        elif args.action == "remove-set":
            pkg = dealer.remove_qualified_set(state, args.secret_id, args.index)
            board.packages[pkg.secret_id] = pkg
        else:  # remove-participant
            for pkg in dealer.remove_participant(
                state, board.params, board.roster, args.id, _rng(args)
            ):
                board.packages[pkg.secret_id] = pkg
                renewed.append(pkg.secret_id)
        board.revision += 1
        bulletin.save(board, args.board)
        _save_dealer(state, args.dealer)
    if args.action in ("renew", "remove-participant"):
        print("renewed: " + (", ".join(renewed) if renewed else "(none)"))
    else:
        print(f"updated: {args.secret_id}")
    return 0


def cmd_simulate(args) -> int:
    config = SimulationConfig(
        participants=args.participants,
        secrets=args.secrets,
        bits_per_prime=args.bits,
        max_minimal_sets=args.max_sets,
        max_set_size=args.max_set_size,
        cheaters_per_session=args.cheaters,
        unauthorized_probes=args.probes,
        seed=args.seed,
    )
    started = time.monotonic()
    report = run_simulation(config)
    elapsed = time.monotonic() - started
    json.dump(report, sys.stdout, indent=2)
    sys.stdout.write("\n")
    print(
        f"{report['summary']['sessions']} sessions, "
        f"{report['summary']['unauthorized_probes']} probes in {elapsed * 1000:.0f} ms",
        file=sys.stderr,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    hooks = bool(os.environ.get("MSSS_TEST_HOOKS"))
    parser = argparse.ArgumentParser(
        prog="msss",
        description="Multi-secret sharing over generalized access structures "
        "with a file-backed public bulletin board.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("setup", help="generate parameters and an empty board")
    p.add_argument("--bits", type=int, default=512, help="bits per prime factor of n")
    p.add_argument("--board", required=True, help="path of the public board file")
    p.add_argument("--dealer", required=True, help="path for the private dealer state")
    p.add_argument("--seed", type=int, help="deterministic randomness (testing)")
    p.add_argument("--force", action="store_true", help="replace existing files")
    if hooks:
        p.add_argument("--test-primes", help="fixed 'p,q' (test hook)")
        p.add_argument("--g", dest="force_g", type=int, help="fixed g (test hook)")
    p.set_defaults(func=cmd_setup)

    p = sub.add_parser("enroll", help="create a participant key and register it")
    p.add_argument("--id", required=True, help="participant id")
    p.add_argument("--board", required=True)
    p.add_argument("--key-out", required=True, help="path for the private key file")
    p.add_argument("--seed", type=int)
    p.add_argument("--force", action="store_true")
    if hooks:
        p.add_argument("--s", dest="force_s", type=int, help="fixed private exponent (test hook)")
    p.set_defaults(func=cmd_enroll)

    p = sub.add_parser("share", help="publish a new secret")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--secret", help="secret value, decimal or 0x-hex")
    group.add_argument("--secret-text", help="secret as text, encoded big-endian")
    p.add_argument("--sets", required=True, help="qualified sets, e.g. 'A,B|B,C'")
    p.add_argument("--board", required=True)
    p.add_argument("--dealer", required=True)
    p.add_argument("--seed", type=int)
    if hooks:
        p.add_argument("--s0", dest="force_s0", type=int, help="fixed s0 (test hook)")
        p.add_argument("--a", dest="force_a", type=int, help="fixed slope (test hook)")
        p.add_argument("--d", dest="force_d", help="fixed d values 'd1,d2' (test hook)")
    p.set_defaults(func=cmd_share)

    p = sub.add_parser("contribute", help="compute one member's reconstruction value")
    p.add_argument("--board", required=True)
    p.add_argument("--key", required=True, help="participant key file")
    p.add_argument("--secret-id", required=True)
    p.add_argument("--set", required=True, help="the qualified set acted as, e.g. 'A,B'")
    p.add_argument("--out", required=True, help="path for the contribution file")
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_contribute)

    p = sub.add_parser("reconstruct", help="recover a secret from contribution files")
    p.add_argument("--board", required=True)
    p.add_argument("--secret-id", required=True)
    p.add_argument("--set", required=True)
    p.add_argument(
        "--contribution", action="append", required=True, help="repeat once per member"
    )
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("verify", help="check contribution files without reconstructing")
    p.add_argument("--board", required=True)
    p.add_argument("--secret-id", required=True)
    p.add_argument("--set", required=True)
    p.add_argument("--contribution", action="append", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("update", help="dynamic updates to published secrets")
    usub = p.add_subparsers(dest="action", required=True)

    u = usub.add_parser("renew", help="re-share a secret id with a fresh value")
    u.add_argument("--board", required=True)
    u.add_argument("--dealer", required=True)
    u.add_argument("--secret-id", required=True)
    group = u.add_mutually_exclusive_group(required=True)
    group.add_argument("--secret")
    group.add_argument("--secret-text")
    u.add_argument("--seed", type=int)
    u.set_defaults(func=cmd_update)

    u = usub.add_parser("add-set", help="grant access to one more qualified set")
    u.add_argument("--board", required=True)
    u.add_argument("--dealer", required=True)
    u.add_argument("--secret-id", required=True)
    u.add_argument("--set", required=True, help="members, e.g. 'C,D'")
    u.add_argument("--seed", type=int)
    if hooks:
        u.add_argument("--d", dest="force_d", type=int, help="fixed d (test hook)")
    u.set_defaults(func=cmd_update)

    u = usub.add_parser("remove-set", help="revoke one qualified set")
    u.add_argument("--board", required=True)
    u.add_argument("--dealer", required=True)
    u.add_argument("--secret-id", required=True)
    u.add_argument("--index", type=int, required=True, help="1-based set index")
    u.set_defaults(func=cmd_update)

    u = usub.add_parser("remove-participant", help="drop a participant and renew their secrets")
    u.add_argument("--board", required=True)
    u.add_argument("--dealer", required=True)
    u.add_argument("--id", required=True)
    u.add_argument("--seed", type=int)
    u.set_defaults(func=cmd_update)

    p = sub.add_parser("simulate", help="run an in-memory deployment and print a JSON report")
    p.add_argument("--participants", type=int, required=True)
    p.add_argument("--secrets", type=int, required=True)
    p.add_argument("--bits", type=int, default=16, help="bits per prime factor")
    p.add_argument("--max-sets", type=int, default=4)
    p.add_argument("--max-set-size", type=int, default=4)
    p.add_argument("--cheaters", type=int, default=0, help="cheaters injected per session")
    p.add_argument("--probes", type=int, default=2, help="non-covering coalitions per secret")
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BadContribution as exc:
        print(f"cheater: {exc.pid}")
        return EXIT_CODES[BadContribution]
    except MsssError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_PARAMETER


if __name__ == "__main__":
    sys.exit(main())
