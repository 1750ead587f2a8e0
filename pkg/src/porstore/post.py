"""Proof-of-Spacetime: a hash-linked chain of replication proofs.

Challenge i is seeded by H(c0 || i_le64 || encode(proof_{i-1})), so proof i
cannot exist before proof i-1 does; the chain forces strictly sequential
generation and therefore witnesses that the replica was held across the
whole interval, not just at one instant.  Verification replays the seed
chain and re-checks every link offline from the transcript alone.

The naive chain trades proof size for simplicity: the transcript carries
every sampled block of every link.  `transcript_stats` measures that cost.
"""

from __future__ import annotations

from dataclasses import dataclass

from .costs import CostModel, SimClock, TimingPolicy
from .encoding import le64
from .errors import InvalidParams
from .merkle import Digest, MerkleTree, hash_bytes
from .pos import (
    DEFAULT_K_PRIME,
    FileManifest,
    challenge_from_dict,
    derive_sampling_challenge,
    response_from_dict,
    response_to_dict,
)
from .porep import PoRepProof, Replica, porep_respond, porep_verify, replica_tree

DEFAULT_CHAIN_LENGTH = 12


@dataclass(frozen=True)
class PoStProof:
    initial_challenge: bytes
    length: int
    proofs: tuple[PoRepProof, ...]
    total_cost: int


def canonical_encode(proof: PoRepProof) -> bytes:
    """Bit-exact encoding used for chain linkage: indices, block bytes,
    path digests, then the two timestamps."""
    parts = [le64(i) for i in proof.challenge.indices]
    parts.extend(block.data for block, _ in proof.response.items)
    for _, path in proof.response.items:
        parts.extend(digest for digest, _ in path.siblings)
    parts.append(le64(proof.started_at))
    parts.append(le64(proof.finished_at))
    return b"".join(parts)


def chain_seed(c0: bytes, counter: int, previous: PoRepProof | None) -> Digest:
    if previous is None:
        return hash_bytes(c0 + le64(counter))
    return hash_bytes(c0 + le64(counter) + canonical_encode(previous))


def generate_post(
    replica: Replica,
    c0: bytes,
    length: int,
    clock: SimClock,
    cost: CostModel,
    k_prime: int = DEFAULT_K_PRIME,
    tree: MerkleTree | None = None,
) -> PoStProof:
    """Generate the chain; each link starts only when its predecessor ends."""
    if length < 1:
        raise InvalidParams("chain length must be >= 1")
    tree = tree or replica_tree(replica)
    k = len(replica.sealed_blocks)
    started = clock.now
    proofs: list[PoRepProof] = []
    previous = None
    for i in range(length):
        seed = chain_seed(c0, i, previous)
        challenge = derive_sampling_challenge(seed, i, k, k_prime)
        previous = porep_respond(replica, challenge, clock, cost, tree=tree)
        proofs.append(previous)
    return PoStProof(initial_challenge=c0, length=length, proofs=tuple(proofs), total_cost=clock.now - started)


def verify_post(manifest: FileManifest, replica_root: Digest, post: PoStProof, policy: TimingPolicy) -> bool:
    """Replay the seed chain and re-verify every link against the policy."""
    if post.length != len(post.proofs) or post.length < 1:
        return False
    k_prime = policy.k_prime if policy.k_prime is not None else len(post.proofs[0].challenge.indices)
    previous = None
    for i, proof in enumerate(post.proofs):
        seed = chain_seed(post.initial_challenge, i, previous)
        if proof.challenge.seed != seed or proof.challenge.epoch != i:
            return False
        derived = derive_sampling_challenge(seed, i, manifest.k, k_prime)
        if proof.challenge.indices != derived.indices:
            return False
        if previous is not None:
            if proof.started_at < previous.finished_at:
                return False
            if policy.contiguous and proof.started_at != previous.finished_at:
                return False
        if not porep_verify(manifest, replica_root, proof, policy):
            return False
        previous = proof
    if post.total_cost != post.proofs[-1].finished_at - post.proofs[0].started_at:
        return False
    return True


# ---------------------------------------------------------------------------
# Transcripts
# ---------------------------------------------------------------------------

def porep_proof_to_dict(proof: PoRepProof) -> dict:
    d = response_to_dict(proof.response)
    d["challenge"] = {
        "seed_hex": proof.challenge.seed.hex(),
        "epoch": proof.challenge.epoch,
        "indices": list(proof.challenge.indices),
    }
    d["started_at"] = proof.started_at
    d["finished_at"] = proof.finished_at
    return d


def porep_proof_from_dict(d: dict) -> PoRepProof:
    return PoRepProof(
        challenge=challenge_from_dict(d["challenge"]),
        response=response_from_dict(d),
        started_at=d["started_at"],
        finished_at=d["finished_at"],
    )


def post_to_dict(post: PoStProof) -> dict:
    return {
        "c0_hex": post.initial_challenge.hex(),
        "length": post.length,
        "proofs": [porep_proof_to_dict(p) for p in post.proofs],
        "total_cost": post.total_cost,
    }


def post_from_dict(d: dict) -> PoStProof:
    return PoStProof(
        initial_challenge=bytes.fromhex(d["c0_hex"]),
        length=d["length"],
        proofs=tuple(porep_proof_from_dict(p) for p in d["proofs"]),
        total_cost=d["total_cost"],
    )


def transcript_stats(post: PoStProof) -> dict:
    """Size accounting for the naive chain's main drawback."""
    per_proof = [len(canonical_encode(p)) for p in post.proofs]
    return {
        "length": post.length,
        "total_cost": post.total_cost,
        "proof_bytes": per_proof,
        "total_bytes": sum(per_proof),
        "mean_proof_bytes": sum(per_proof) // max(1, len(per_proof)),
    }
