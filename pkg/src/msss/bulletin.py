"""The public bulletin board: one canonical JSON document holding the system
parameters, the roster of pseudo-shares, and every secret package.

Document layout (fixed key order; maps keep insertion order; big integers
are lowercase hex with no leading zeros; tags are 64 hex chars):

    {
      "revision": 3,
      "params": {"g": "f", "n": "8f", "m": "95", "width": 1},
      "roster": {"A": "2d", "B": "73"},
      "packages": {
        "s1": {
          "ps0": "73", "h0": "67", "f1": "69",
          "entries": [
            {"members": ["A", "B"], "d": "7", "masked": "b8", "tag": "9266..."}
          ]
        }
      }
    }

Identical boards serialize byte-identically, and ``load`` re-checks every
public invariant before returning, so a tampered or hand-edited document
either fails loudly here or is caught later by the tag check.
"""

from __future__ import annotations

import json
import os
import re
from dataclasses import dataclass, field

from . import codec
from .accessstruct import validate_minimal
from .dealer import PackageEntry, PublicParams, SecretPackage
from .errors import (
    BoardIOError,
    EmptySet,
    EmptyStructure,
    InvariantViolation,
    MalformedDocument,
    NotAntichain,
)
from .numtheory import ceil_sqrt, gcd, is_probable_prime

_HEX = re.compile(r"[0-9a-f]+")
_TAG_HEX = re.compile(r"[0-9a-f]{64}")


def int_to_hex(value: int) -> str:
    return format(value, "x")


def hex_to_int(value, where: str) -> int:
    if not isinstance(value, str) or not _HEX.fullmatch(value):
        raise MalformedDocument(f"{where}: expected a lowercase hex string, got {value!r}")
    return int(value, 16)


@dataclass
class Board:
    """In-memory image of the bulletin. The dealer is the only writer; the
    revision counter goes up by one on every published change."""

    params: PublicParams
    roster: dict[str, int] = field(default_factory=dict)
    packages: dict[str, SecretPackage] = field(default_factory=dict)
    revision: int = 0

    def validate(self) -> None:
        """Re-check every public invariant; raises InvariantViolation."""
        p = self.params
        if p.n < 4:
            raise InvariantViolation("n too small to be a product of two primes")
        if p.m <= p.n:
            raise InvariantViolation("m not larger than n")
        if not is_probable_prime(p.m):
            raise InvariantViolation("m not prime")
        if p.width != codec.mask_width(p.m):
            raise InvariantViolation("width does not match m")
        if not ceil_sqrt(p.n) <= p.g <= p.n:
            raise InvariantViolation("g outside [sqrt(n), n]")
        if gcd(p.g, p.n) != 1:
            raise InvariantViolation("g shares a factor with n")
        if self.revision < 0:
            raise InvariantViolation("negative revision")
        for pid, ps in self.roster.items():
            if not isinstance(pid, str) or not pid:
                raise InvariantViolation("empty participant id on the roster")
            if not 0 <= ps < p.n:
                raise InvariantViolation(f"pseudo-share of {pid} not reduced mod n")
        for sid, pkg in self.packages.items():
            if pkg.secret_id != sid:
                raise InvariantViolation(f"package keyed {sid} carries id {pkg.secret_id}")
            if not pkg.entries:
                raise InvariantViolation(f"{sid}: no qualified sets")
            if not 0 <= pkg.ps0 < p.n:
                raise InvariantViolation(f"{sid}: ps0 not reduced mod n")
            if pkg.h0 < 1:
                raise InvariantViolation(f"{sid}: h0 must be positive")
            if not 0 <= pkg.f1 < p.m:
                raise InvariantViolation(f"{sid}: f1 not a field element")
            ds = [e.d for e in pkg.entries]
            if len(set(ds)) != len(ds):
                raise InvariantViolation(f"{sid}: duplicate d")
            for e in pkg.entries:
                if not 2 <= e.d < p.m:
                    raise InvariantViolation(f"{sid}: d {e.d} outside [2, m - 1]")
                if not 0 <= e.masked < 256**p.width:
                    raise InvariantViolation(f"{sid}: masked value wider than {p.width} bytes")
                if len(e.tag) != codec.TAG_BYTES:
                    raise InvariantViolation(f"{sid}: tag must be {codec.TAG_BYTES} bytes")
                for pid in e.members:
                    if pid not in self.roster:
                        raise InvariantViolation(f"{sid}: member {pid} is not on the roster")
            try:
                validate_minimal([e.members for e in pkg.entries])
            except (NotAntichain, EmptySet, EmptyStructure) as exc:
                raise InvariantViolation(f"{sid}: {exc}") from exc


def package_to_obj(pkg: SecretPackage) -> dict:
    return {
        "ps0": int_to_hex(pkg.ps0),
        "h0": int_to_hex(pkg.h0),
        "f1": int_to_hex(pkg.f1),
        "entries": [
            {
                "members": sorted(e.members),
                "d": int_to_hex(e.d),
                "masked": int_to_hex(e.masked),
                "tag": e.tag.hex(),
            }
            for e in pkg.entries
        ],
    }


def _require_keys(obj, keys, where: str) -> None:
    if not isinstance(obj, dict):
        raise MalformedDocument(f"{where}: expected an object")
    missing = [k for k in keys if k not in obj]
    extra = [k for k in obj if k not in keys]
    if missing or extra:
        raise MalformedDocument(f"{where}: missing keys {missing}, unexpected keys {extra}")


def package_from_obj(secret_id: str, obj, where: str) -> SecretPackage:
    _require_keys(obj, ("ps0", "h0", "f1", "entries"), where)
    if not isinstance(obj["entries"], list):
        raise MalformedDocument(f"{where}: entries must be a list")
    entries = []
    for k, raw in enumerate(obj["entries"]):
        ewhere = f"{where} entry {k + 1}"
        _require_keys(raw, ("members", "d", "masked", "tag"), ewhere)
        members = raw["members"]
        if (
            not isinstance(members, list)
            or not members
            or not all(isinstance(pid, str) and pid for pid in members)
        ):
            raise MalformedDocument(f"{ewhere}: members must be a non-empty list of ids")
        if len(set(members)) != len(members):
            raise MalformedDocument(f"{ewhere}: duplicate member ids")
        tag_hex = raw["tag"]
        if not isinstance(tag_hex, str) or not _TAG_HEX.fullmatch(tag_hex):
            raise MalformedDocument(f"{ewhere}: tag must be 64 lowercase hex chars")
        entries.append(
            PackageEntry(
                members=frozenset(members),
                d=hex_to_int(raw["d"], f"{ewhere} d"),
                masked=hex_to_int(raw["masked"], f"{ewhere} masked"),
                tag=bytes.fromhex(tag_hex),
            )
        )
    return SecretPackage(
        secret_id=secret_id,
        ps0=hex_to_int(obj["ps0"], f"{where} ps0"),
        h0=hex_to_int(obj["h0"], f"{where} h0"),
        f1=hex_to_int(obj["f1"], f"{where} f1"),
        entries=tuple(entries),
    )


def to_document(board: Board) -> str:
    """Canonical serialization; identical boards give identical bytes."""
    board.validate()
    obj = {
        "revision": board.revision,
        "params": {
            "g": int_to_hex(board.params.g),
            "n": int_to_hex(board.params.n),
            "m": int_to_hex(board.params.m),
            "width": board.params.width,
        },
        "roster": {pid: int_to_hex(ps) for pid, ps in board.roster.items()},
        "packages": {sid: package_to_obj(pkg) for sid, pkg in board.packages.items()},
    }
    return json.dumps(obj, indent=2) + "\n"


def from_document(text: str) -> Board:
    """Parse a bulletin document and re-validate all invariants.

    Raises MalformedDocument for syntax or shape problems and
    InvariantViolation (naming the rule) for semantic ones.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"not valid JSON: {exc}") from exc
    _require_keys(obj, ("revision", "params", "roster", "packages"), "document")
    revision = obj["revision"]
    if type(revision) is not int:
        raise MalformedDocument("revision must be an integer")
    praw = obj["params"]
    _require_keys(praw, ("g", "n", "m", "width"), "params")
    if type(praw["width"]) is not int:
        raise MalformedDocument("params width must be an integer")
    params = PublicParams(
        g=hex_to_int(praw["g"], "params g"),
        n=hex_to_int(praw["n"], "params n"),
        m=hex_to_int(praw["m"], "params m"),
        width=praw["width"],
    )
    if not isinstance(obj["roster"], dict):
        raise MalformedDocument("roster must be an object")
    roster = {}
    for pid, raw in obj["roster"].items():
        roster[pid] = hex_to_int(raw, f"roster {pid}")
    if not isinstance(obj["packages"], dict):
        raise MalformedDocument("packages must be an object")
    packages = {}
    for sid, raw in obj["packages"].items():
        packages[sid] = package_from_obj(sid, raw, f"package {sid}")
    board = Board(params=params, roster=roster, packages=packages, revision=revision)
    board.validate()
    return board


def save(board: Board, path) -> str:
    """Write the canonical document atomically (temp file plus rename), so
    concurrent readers always see a complete board. Returns the document."""
    doc = to_document(board)
    path = os.fspath(path)
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(doc)
        os.replace(tmp, path)
    except OSError as exc:
        raise BoardIOError(f"cannot write board {path}: {exc}") from exc
    return doc


def load(path) -> Board:
    path = os.fspath(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise BoardIOError(f"cannot read board {path}: {exc}") from exc
    return from_document(text)
