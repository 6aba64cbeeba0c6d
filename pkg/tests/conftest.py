import sys
from dataclasses import dataclass
from pathlib import Path

SRC = Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

import pytest

from msss import accessstruct, dealer, participant


@dataclass
class ToyWorld:
    """The fixed hand-checkable deployment: p=11, q=13, g=15, m=149,
    s_A=5, s_B=7, s0=7, slope=5, d=7, secret=100."""

    params: dealer.PublicParams
    state: dealer.DealerState
    key_a: participant.ParticipantKey
    key_b: participant.ParticipantKey
    roster: dict
    package: dealer.SecretPackage
    secret: int = 100


def make_toy_world() -> ToyWorld:
    params, state = dealer.setup(4, force_primes=(11, 13), force_g=15)
    key_a = participant.keygen(params, "A", force_s=5)
    key_b = participant.keygen(params, "B", force_s=7)
    roster = {"A": key_a.ps, "B": key_b.ps}
    structure = accessstruct.validate_minimal([["A", "B"]])
    package = dealer.share_secret(
        state, params, roster, 100, structure, force_s0=7, force_a1=5, force_d=[7]
    )
    return ToyWorld(
        params=params, state=state, key_a=key_a, key_b=key_b, roster=roster, package=package
    )


@pytest.fixture
def toy() -> ToyWorld:
    return make_toy_world()
