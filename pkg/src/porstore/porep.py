"""Proof-of-Replication: identity-bound sealing plus timed sampled audits.

Sealing XORs each block with a keystream derived from a hash chain over
(node_tag, salt, block index).  The chain depth d makes the keystream
deliberately slow to recompute (d sequential hashes, not parallelizable),
while unsealing with the stored keystream result is cheap.  An audit then
samples the *sealed* blocks against the replica's own Merkle root, and the
verifier rejects proofs whose simulated generation time exceeds the
policy: a prover that kept only raw data (generation attack), one replica
for many identities (Sybil), or no data at all (outsourcing) must pay the
reseal or fetch cost inside the challenge window and misses the deadline.

This XOR/hash-chain seal is a simulation-grade stand-in for a verifiable
delay encoding, not a production one.
"""

from __future__ import annotations

from dataclasses import dataclass

from .costs import CostModel, SimClock, TimingPolicy
from .encoding import le64
from .errors import EmptyInput, InvalidParams
from .merkle import Block, Digest, MerkleTree, build_tree, hash_bytes, path_length
from .pos import FileManifest, SamplingChallenge, SamplingResponse, respond_sampling, verify_sampling

DEFAULT_DELAY_ITERS = 10_000


@dataclass(frozen=True)
class SealParams:
    delay_iters: int
    node_tag: bytes
    salt: bytes

    def __post_init__(self):
        if self.delay_iters < 1:
            raise InvalidParams("delay_iters must be >= 1")
        if not self.node_tag:
            raise InvalidParams("node_tag must be non-empty")


@dataclass(frozen=True)
class Replica:
    params: SealParams
    sealed_blocks: tuple[bytes, ...]
    replica_root: Digest


@dataclass(frozen=True)
class PoRepProof:
    challenge: SamplingChallenge
    response: SamplingResponse
    started_at: int
    finished_at: int


def keystream(params: SealParams, index: int, block_size: int) -> bytes:
    """block_size keystream bytes behind d sequential hash iterations.

    s_0 = H(tag || salt || index_le64); s_j = H(s_{j-1}); output is the
    counter-mode expansion of s_d.  The d-step chain is the whole point:
    regenerating it on demand costs d * hash_cost of simulated time.
    """
    state = hash_bytes(params.node_tag + params.salt + le64(index))
    for _ in range(params.delay_iters):
        state = hash_bytes(state)
    out = bytearray()
    counter = 0
    while len(out) < block_size:
        out.extend(hash_bytes(state + le64(counter)))
        counter += 1
    return bytes(out[:block_size])


def seal_block(data: bytes, params: SealParams, index: int) -> bytes:
    ks = keystream(params, index, len(data))
    return bytes(a ^ b for a, b in zip(data, ks))


def unseal_block(replica_block: bytes, params: SealParams, index: int) -> bytes:
    # XOR is an involution; unseal is seal with the same keystream.
    return seal_block(replica_block, params, index)


def seal_file(blocks: list[Block], params: SealParams) -> Replica:
    """Seal every block and commit to the sealed set."""
    if not blocks:
        raise EmptyInput("cannot seal an empty file")
    sealed = tuple(seal_block(b.data, params, b.index) for b in blocks)
    tree = build_tree([Block(index=i, data=d) for i, d in enumerate(sealed)])
    return Replica(params=params, sealed_blocks=sealed, replica_root=tree.root)


def replica_tree(replica: Replica) -> MerkleTree:
    return build_tree([Block(index=i, data=d) for i, d in enumerate(replica.sealed_blocks)])


def honest_response_cost(k: int, indices: tuple[int, ...], cost: CostModel) -> int:
    """Simulated cost of serving stored sealed blocks with their paths."""
    return sum(cost.block_read_cost + path_length(k, i) * cost.hash_cost for i in indices)


def porep_respond(
    replica: Replica,
    challenge: SamplingChallenge,
    clock: SimClock,
    cost: CostModel,
    tree: MerkleTree | None = None,
) -> PoRepProof:
    """Honest prover: read sealed blocks, serve paths, charge the clock."""
    tree = tree or replica_tree(replica)
    started = clock.now
    store = {i: d for i, d in enumerate(replica.sealed_blocks)}
    response = respond_sampling(store, tree, challenge)
    clock.advance(honest_response_cost(len(replica.sealed_blocks), challenge.indices, cost))
    return PoRepProof(challenge=challenge, response=response, started_at=started, finished_at=clock.now)


def porep_verify(manifest: FileManifest, replica_root: Digest, proof: PoRepProof, policy: TimingPolicy) -> bool:
    """Accept iff the sampled proof checks out against the replica root and
    the recorded generation time fits the policy."""
    if proof.finished_at < proof.started_at:
        return False
    if policy.k_prime is not None and len(proof.challenge.indices) != policy.k_prime:
        return False
    elapsed = proof.finished_at - proof.started_at
    if elapsed > policy.t_max:
        return False
    if policy.expected_cost is not None:
        if elapsed != honest_response_cost(manifest.k, proof.challenge.indices, policy.expected_cost):
            return False
    audit_manifest = FileManifest(
        file_id=manifest.file_id,
        total_length=manifest.total_length,
        block_size=manifest.block_size,
        k=manifest.k,
        merkle_root=replica_root,
        coding=manifest.coding,
        seal_tag=manifest.seal_tag,
    )
    return verify_sampling(audit_manifest, proof.challenge, proof.response)


# ---------------------------------------------------------------------------
# Replica manifest files
# ---------------------------------------------------------------------------

def replica_manifest_to_dict(file_id: str, replica: Replica) -> dict:
    return {
        "file_id": file_id,
        "node_tag": replica.params.node_tag.decode("utf-8"),
        "salt_hex": replica.params.salt.hex(),
        "delay_iters": replica.params.delay_iters,
        "replica_root_hex": replica.replica_root.hex(),
    }


def seal_params_from_dict(d: dict) -> SealParams:
    return SealParams(
        delay_iters=d["delay_iters"],
        node_tag=d["node_tag"].encode("utf-8"),
        salt=bytes.fromhex(d["salt_hex"]),
    )
