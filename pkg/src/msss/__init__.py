"""msss: multi-secret sharing over generalized monotone access structures.

Several secrets, each with its own family of qualified participant sets,
are shared through a public bulletin board. Participants pick their own
private exponents and publish only discrete-log pseudo-shares, so no
secure channel is needed, shares are reusable across secrets, every
contribution is publicly checkable during reconstruction, and the dealer
can renew secrets or reshape access structures without touching anyone's
private share.
"""

from .accessstruct import (
    AccessStructure,
    ParticipantId,
    is_authorized,
    matching_set_index,
    validate_minimal,
)
from .bulletin import Board, from_document, load, save, to_document
from .codec import encode_fixed, mask_width, tag, xor_combine
from .combiner import peer_reconstruct, reconstruct, verify_contribution, verify_secret
from .dealer import (
    DealerSecretRecord,
    DealerState,
    PackageEntry,
    PublicParams,
    SecretPackage,
    add_qualified_set,
    remove_participant,
    remove_qualified_set,
    renew_secret,
    setup,
    share_secret,
)
from .errors import MsssError
from .linepoly import LinePoly, interpolate_line
from .numtheory import gcd, gen_prime, mod_exp, mod_inv
from .participant import Contribution, ParticipantKey, contribute, keygen
from .simulate import SimulationConfig, run_simulation

__version__ = "0.1.0"

__all__ = [
    "AccessStructure",
    "Board",
    "Contribution",
    "DealerSecretRecord",
    "DealerState",
    "LinePoly",
    "MsssError",
    "PackageEntry",
    "ParticipantId",
    "ParticipantKey",
    "PublicParams",
    "SecretPackage",
    "SimulationConfig",
    "add_qualified_set",
    "contribute",
    "encode_fixed",
    "from_document",
    "gcd",
    "gen_prime",
    "interpolate_line",
    "is_authorized",
    "keygen",
    "load",
    "mask_width",
    "matching_set_index",
    "mod_exp",
    "mod_inv",
    "peer_reconstruct",
    "reconstruct",
    "remove_participant",
    "remove_qualified_set",
    "renew_secret",
    "run_simulation",
    "save",
    "setup",
    "share_secret",
    "tag",
    "to_document",
    "validate_minimal",
    "verify_contribution",
    "verify_secret",
    "xor_combine",
]
