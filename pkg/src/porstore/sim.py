"""Deterministic simulation of a storage network under audit.

One SimWorld holds a file commitment, a set of nodes (honest or running
one of the classic storage attacks), a cost model, and a monotone clock.
Each epoch the auditor derives a fresh challenge from the public
commitment and the epoch number, every node answers according to its
behavior, and the verifier's verdicts land in the audit log.

Attack behaviors and how each protocol sees them:

* Dropper      - keeps a (1 - delta) fraction of blocks; sampled audits
                 catch it with probability 1 - (1 - delta)^k'.
* Generation   - keeps only raw data and reseals challenged blocks on
                 demand; content verifies, but the d-deep keystream chain
                 blows the PoRep deadline.  Under PoSt it holds the
                 replica through the first link and reseals afterwards
                 (drop-then-reseal).
* Sybil        - registers several identities over one physical replica;
                 every identity beyond the first must unseal + reseal per
                 audit and misses the deadline.
* Outsourcing  - stores nothing and fetches blocks from a remote holder;
                 the per-block fetch cost overruns the deadline.

Plain PoS accepts the generation, Sybil, and outsourcing behaviors (it
only ever checks the instantaneous content), which is exactly why the
timed replication protocols exist; the detection matrix in the report
makes that visible.

Everything is derived from rng_seed, so identical configs produce
byte-identical reports, serially or with parallel workers: trials only
share read-only state and aggregate by summation.
"""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from random import Random
from typing import Optional, Union

from .costs import CostModel, SimClock, TimingPolicy, default_t_max
from .encoding import le64
from .erasure import encode as rs_encode
from .errors import ConfigError, InvalidParams
from .merkle import Block, MerkleTree, build_tree, hash_bytes, path_length
from .pos import (
    CodeParams,
    FileManifest,
    SamplingChallenge,
    derive_sampling_challenge,
    respond_sampling,
    verify_sampling,
)
from .porep import (
    DEFAULT_DELAY_ITERS,
    PoRepProof,
    Replica,
    SealParams,
    honest_response_cost,
    porep_verify,
    seal_file,
)
from .post import DEFAULT_CHAIN_LENGTH, PoStProof, canonical_encode, chain_seed, verify_post

PROTOCOLS = ("pos", "porep", "post")


# ---------------------------------------------------------------------------
# Node behaviors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Honest:
    pass


@dataclass(frozen=True)
class Dropper:
    drop_fraction: float
    mode: str = "independent"  # or "fixed_subset"
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.drop_fraction <= 1.0:
            raise InvalidParams("drop_fraction must be in [0, 1]")
        if self.mode not in ("independent", "fixed_subset"):
            raise InvalidParams(f"unknown dropper mode {self.mode!r}")


@dataclass(frozen=True)
class GenerationAttacker:
    pass


@dataclass(frozen=True)
class SybilAttacker:
    identity_count: int = 2

    def __post_init__(self):
        if self.identity_count < 2:
            raise InvalidParams("a Sybil attacker needs at least 2 identities")


@dataclass(frozen=True)
class OutsourcingAttacker:
    holder_id: str = "holder-0"


NodeBehavior = Union[Honest, Dropper, GenerationAttacker, SybilAttacker, OutsourcingAttacker]

_BEHAVIOR_LABELS = {
    Honest: "honest",
    Dropper: "dropper",
    GenerationAttacker: "generation",
    SybilAttacker: "sybil",
    OutsourcingAttacker: "outsourcing",
}


def behavior_label(behavior: NodeBehavior) -> str:
    return _BEHAVIOR_LABELS[type(behavior)]


def behavior_to_dict(behavior: NodeBehavior) -> dict:
    d = {"type": behavior_label(behavior)}
    if isinstance(behavior, Dropper):
        d.update(drop_fraction=behavior.drop_fraction, mode=behavior.mode, seed=behavior.seed)
    elif isinstance(behavior, SybilAttacker):
        d.update(identity_count=behavior.identity_count)
    elif isinstance(behavior, OutsourcingAttacker):
        d.update(holder_id=behavior.holder_id)
    return d


def behavior_from_dict(d: dict) -> NodeBehavior:
    kind = d.get("type")
    if kind == "honest":
        return Honest()
    if kind == "dropper":
        return Dropper(
            drop_fraction=d["drop_fraction"],
            mode=d.get("mode", "independent"),
            seed=d.get("seed", 0),
        )
    if kind == "generation":
        return GenerationAttacker()
    if kind == "sybil":
        return SybilAttacker(identity_count=d.get("identity_count", 2))
    if kind == "outsourcing":
        return OutsourcingAttacker(holder_id=d.get("holder_id", "holder-0"))
    raise ConfigError(f"unknown behavior type {kind!r}")


# ---------------------------------------------------------------------------
# Experiment configuration
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    protocol: str
    k: int
    k_prime: int
    block_size: int
    behaviors: tuple[NodeBehavior, ...]
    trials: int
    rng_seed: bytes
    coding: Optional[CodeParams] = None
    delay_iters: int = DEFAULT_DELAY_ITERS
    t_max: Optional[int] = None
    post_length: int = DEFAULT_CHAIN_LENGTH

    def __post_init__(self):
        if self.protocol not in PROTOCOLS:
            raise ConfigError(f"unknown protocol {self.protocol!r}")
        if self.trials < 1:
            raise InvalidParams("trials must be >= 1")
        if self.coding is not None and self.coding.n_total != self.k:
            raise ConfigError("with coding, k must equal coding.n_total (audits run over shards)")

    def resolved_t_max(self, cost: CostModel) -> int:
        return self.t_max if self.t_max is not None else default_t_max(self.k_prime, cost)

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "k": self.k,
            "k_prime": self.k_prime,
            "block_size": self.block_size,
            "coding": None if self.coding is None else {"k_data": self.coding.k_data, "n_total": self.coding.n_total},
            "seal": {"d": self.delay_iters, "t_max": self.t_max},
            "post_length": self.post_length,
            "behaviors": [behavior_to_dict(b) for b in self.behaviors],
            "trials": self.trials,
            "rng_seed_hex": self.rng_seed.hex(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        coding = d.get("coding")
        seal = d.get("seal") or {}
        return cls(
            protocol=d["protocol"],
            k=d["k"],
            k_prime=d["k_prime"],
            block_size=d["block_size"],
            behaviors=tuple(behavior_from_dict(b) for b in d["behaviors"]),
            trials=d["trials"],
            rng_seed=bytes.fromhex(d["rng_seed_hex"]),
            coding=None if coding is None else CodeParams(coding["k_data"], coding["n_total"]),
            delay_iters=seal.get("d", DEFAULT_DELAY_ITERS),
            t_max=seal.get("t_max"),
            post_length=d.get("post_length", DEFAULT_CHAIN_LENGTH),
        )


def expand_bytes(seed: bytes, length: int) -> bytes:
    out = bytearray()
    counter = 0
    while len(out) < length:
        out.extend(hash_bytes(seed + le64(counter)))
        counter += 1
    return bytes(out[:length])


# ---------------------------------------------------------------------------
# World state
# ---------------------------------------------------------------------------

@dataclass
class AuditRecord:
    epoch: int
    node_id: str
    file_id: str
    protocol: str
    verdict: str  # "accept" | "reject"
    elapsed: int
    reject_reason: Optional[str] = None
    identity: int = 0
    proof_bytes: int = 0

    def __post_init__(self):
        if self.verdict == "reject" and not self.reject_reason:
            raise InvalidParams("a reject verdict needs a reject_reason")


@dataclass
class FileState:
    manifest: FileManifest
    blocks: list[Block]
    tree: MerkleTree
    block_map: dict[int, bytes]


@dataclass
class NodeState:
    node_id: str
    behavior: NodeBehavior
    seal_params: list[SealParams] = field(default_factory=list)
    replicas: list[Replica] = field(default_factory=list)
    replica_trees: list[MerkleTree] = field(default_factory=list)
    fixed_drop: Optional[frozenset[int]] = None


class _DropView:
    """Block store that denies a behavior-determined subset of indices."""

    def __init__(self, base: dict[int, bytes], dropped):
        self._base = base
        self._dropped = dropped

    def get(self, index: int) -> Optional[bytes]:
        if self._dropped(index):
            return None
        return self._base.get(index)


class SimWorld:
    """All mutable simulation state for one experiment lane."""

    def __init__(self, config: ExperimentConfig, cost: Optional[CostModel] = None):
        self.config = config
        self.cost = cost or CostModel()
        self.clock = SimClock()
        self.rng_seed = config.rng_seed
        self.audit_log: list[AuditRecord] = []
        self.files: dict[str, FileManifest] = {}
        self.nodes: dict[str, NodeState] = {}
        self._file_states: dict[str, FileState] = {}
        self._build()

    # -- construction ------------------------------------------------------

    def _build(self) -> None:
        cfg = self.config
        file_id = "file-0"
        if cfg.coding is None:
            data = expand_bytes(hash_bytes(self.rng_seed + b"file"), cfg.k * cfg.block_size)
            blocks = [Block(i, data[i * cfg.block_size : (i + 1) * cfg.block_size]) for i in range(cfg.k)]
            coding = None
        else:
            data = expand_bytes(hash_bytes(self.rng_seed + b"file"), cfg.coding.k_data * cfg.block_size)
            raw = [data[i * cfg.block_size : (i + 1) * cfg.block_size] for i in range(cfg.coding.k_data)]
            encoded = rs_encode(raw, cfg.coding)
            blocks = [Block(i, shard) for i, shard in encoded.shards]
            coding = cfg.coding
        tree = build_tree(blocks)
        manifest = FileManifest(
            file_id=file_id,
            total_length=len(data),
            block_size=cfg.block_size,
            k=len(blocks),
            merkle_root=tree.root,
            coding=coding,
        )
        self.files[file_id] = manifest
        self._file_states[file_id] = FileState(
            manifest=manifest,
            blocks=blocks,
            tree=tree,
            block_map={b.index: b.data for b in blocks},
        )

        for ordinal, behavior in enumerate(cfg.behaviors):
            node_id = f"{behavior_label(behavior)}-{ordinal}"
            node = NodeState(node_id=node_id, behavior=behavior)
            if isinstance(behavior, Dropper) and behavior.mode == "fixed_subset":
                node.fixed_drop = self._fixed_drop_subset(node_id, behavior, len(blocks))
            if cfg.protocol in ("porep", "post"):
                identity_count = behavior.identity_count if isinstance(behavior, SybilAttacker) else 1
                for j in range(identity_count):
                    params = SealParams(
                        delay_iters=cfg.delay_iters,
                        node_tag=f"{node_id}:{j}".encode(),
                        salt=hash_bytes(self.rng_seed + node_id.encode() + le64(j)),
                    )
                    # Content commitments are computed once here; attackers
                    # that "reseal on demand" later serve these exact bytes
                    # (sealing is pure) and are charged the recompute cost
                    # in simulated time instead.
                    replica = seal_file(blocks, params)
                    node.seal_params.append(params)
                    node.replicas.append(replica)
                    node.replica_trees.append(
                        build_tree([Block(i, d) for i, d in enumerate(replica.sealed_blocks)])
                    )
            self.nodes[node_id] = node

    def _fixed_drop_subset(self, node_id: str, behavior: Dropper, k: int) -> frozenset[int]:
        digest = hash_bytes(self.rng_seed + node_id.encode() + le64(behavior.seed) + b"fixed")
        rng = Random(int.from_bytes(digest, "big"))
        count = round(behavior.drop_fraction * k)
        return frozenset(rng.sample(range(k), count))

    # -- behavior plumbing ---------------------------------------------------

    def _drop_view(self, node: NodeState, base: dict[int, bytes], challenge_seed: bytes) -> _DropView:
        behavior = node.behavior
        assert isinstance(behavior, Dropper)
        if behavior.mode == "fixed_subset":
            dropped_set = node.fixed_drop
            return _DropView(base, lambda i: i in dropped_set)
        threshold = int(behavior.drop_fraction * (1 << 64))
        prefix = self.rng_seed + node.node_id.encode() + le64(behavior.seed) + challenge_seed

        def dropped(i: int) -> bool:
            word = int.from_bytes(hash_bytes(prefix + le64(i))[:8], "little")
            return word < threshold

        return _DropView(base, dropped)

    def _policy(self, strict: bool) -> TimingPolicy:
        cfg = self.config
        return TimingPolicy(
            t_max=cfg.resolved_t_max(self.cost),
            k_prime=cfg.k_prime,
            expected_cost=self.cost if strict else None,
            contiguous=strict,
        )

    # -- audits --------------------------------------------------------------

    def run_audit_epoch(self, epoch: int, protocol: Optional[str] = None) -> list[AuditRecord]:
        """Challenge every node once and append the verdicts to the log."""
        if not self.nodes or not self.files:
            raise ConfigError("world has no registered nodes or files")
        protocol = protocol or self.config.protocol
        if protocol not in PROTOCOLS:
            raise ConfigError(f"unknown protocol {protocol!r}")
        records = []
        for file_id in self.files:
            for node in self.nodes.values():
                if protocol == "pos":
                    records.append(self._audit_pos(node, file_id, epoch))
                else:
                    identities = range(len(node.seal_params))
                    for j in identities:
                        if protocol == "porep":
                            records.append(self._audit_porep(node, file_id, epoch, j))
                        else:
                            records.append(self._audit_post(node, file_id, epoch, j))
        self.audit_log.extend(records)
        return records

    def _audit_pos(self, node: NodeState, file_id: str, epoch: int) -> AuditRecord:
        fs = self._file_states[file_id]
        cfg, cost = self.config, self.cost
        seed = hash_bytes(fs.manifest.merkle_root + le64(epoch))
        challenge = derive_sampling_challenge(seed, epoch, fs.manifest.k, cfg.k_prime)
        behavior = node.behavior

        store = fs.block_map
        charge = honest_response_cost(fs.manifest.k, challenge.indices, cost)
        if isinstance(behavior, Dropper):
            store = self._drop_view(node, fs.block_map, challenge.seed)
        elif isinstance(behavior, OutsourcingAttacker):
            charge = cost.network_latency + sum(
                cost.fetch_remote_cost + path_length(fs.manifest.k, i) * cost.hash_cost for i in challenge.indices
            )

        started = self.clock.now
        response = respond_sampling(store, fs.tree, challenge)
        self.clock.advance(charge)
        ok = verify_sampling(fs.manifest, challenge, response)
        size = _response_bytes(challenge, response)
        return AuditRecord(
            epoch=epoch,
            node_id=node.node_id,
            file_id=file_id,
            protocol="pos",
            verdict="accept" if ok else "reject",
            elapsed=self.clock.now - started,
            reject_reason=None if ok else "sampling",
            proof_bytes=size,
        )

    def _porep_link(
        self, node: NodeState, fs: FileState, identity: int, challenge: SamplingChallenge, resealing: bool
    ) -> PoRepProof:
        """One PoRep response under this node's behavior; charges the clock."""
        cfg, cost = self.config, self.cost
        behavior = node.behavior
        replica = node.replicas[identity]
        tree = node.replica_trees[identity]
        k = fs.manifest.k
        base = {i: d for i, d in enumerate(replica.sealed_blocks)}

        store = base
        charge = honest_response_cost(k, challenge.indices, cost)
        if isinstance(behavior, Dropper):
            store = self._drop_view(node, base, challenge.seed)
        elif isinstance(behavior, GenerationAttacker) and resealing:
            # keystream chain per challenged block, then the read and path
            charge += len(challenge.indices) * cfg.delay_iters * cost.hash_cost
        elif isinstance(behavior, SybilAttacker) and identity > 0:
            # unseal the real replica, reseal under the claimed identity
            charge += len(challenge.indices) * 2 * cfg.delay_iters * cost.hash_cost
        elif isinstance(behavior, OutsourcingAttacker):
            charge = cost.network_latency + sum(
                cost.fetch_remote_cost + path_length(k, i) * cost.hash_cost for i in challenge.indices
            )

        started = self.clock.now
        response = respond_sampling(store, tree, challenge)
        self.clock.advance(charge)
        return PoRepProof(challenge=challenge, response=response, started_at=started, finished_at=self.clock.now)

    def _audit_porep(self, node: NodeState, file_id: str, epoch: int, identity: int) -> AuditRecord:
        fs = self._file_states[file_id]
        cfg = self.config
        replica_root = node.replicas[identity].replica_root
        c0 = hash_bytes(replica_root + le64(epoch))
        challenge = derive_sampling_challenge(c0, epoch, fs.manifest.k, cfg.k_prime)
        proof = self._porep_link(node, fs, identity, challenge, resealing=True)
        policy = self._policy(strict=False)
        ok = porep_verify(fs.manifest, replica_root, proof, policy)
        reason = None
        if not ok:
            timing_ok = proof.finished_at - proof.started_at <= policy.t_max
            reason = "sampling" if timing_ok else "timing"
        return AuditRecord(
            epoch=epoch,
            node_id=node.node_id,
            file_id=file_id,
            protocol="porep",
            verdict="accept" if ok else "reject",
            elapsed=proof.finished_at - proof.started_at,
            reject_reason=reason,
            identity=identity,
            proof_bytes=len(canonical_encode(proof)),
        )

    def _audit_post(self, node: NodeState, file_id: str, epoch: int, identity: int) -> AuditRecord:
        fs = self._file_states[file_id]
        cfg = self.config
        replica_root = node.replicas[identity].replica_root
        c0 = hash_bytes(replica_root + le64(epoch))

        started = self.clock.now
        proofs: list[PoRepProof] = []
        previous = None
        for i in range(cfg.post_length):
            seed = chain_seed(c0, i, previous)
            challenge = derive_sampling_challenge(seed, i, fs.manifest.k, cfg.k_prime)
            # Drop-then-reseal: the replica is on disk for the first link
            # and regenerated for every later one.
            resealing = i > 0
            previous = self._porep_link(node, fs, identity, challenge, resealing=resealing)
            proofs.append(previous)
        post = PoStProof(
            initial_challenge=c0,
            length=cfg.post_length,
            proofs=tuple(proofs),
            total_cost=self.clock.now - started,
        )

        policy = self._policy(strict=True)
        ok = verify_post(fs.manifest, replica_root, post, policy)
        reason = None
        if not ok:
            if any(p.finished_at - p.started_at > policy.t_max for p in post.proofs):
                reason = "timing"
            elif all(verify_sampling_like(fs.manifest, replica_root, p) for p in post.proofs):
                reason = "chain"
            else:
                reason = "sampling"
        stats_bytes = sum(len(canonical_encode(p)) for p in post.proofs)
        return AuditRecord(
            epoch=epoch,
            node_id=node.node_id,
            file_id=file_id,
            protocol="post",
            verdict="accept" if ok else "reject",
            elapsed=post.total_cost,
            reject_reason=reason,
            identity=identity,
            proof_bytes=stats_bytes,
        )


def verify_sampling_like(manifest: FileManifest, replica_root: bytes, proof: PoRepProof) -> bool:
    from dataclasses import replace

    return verify_sampling(replace(manifest, merkle_root=replica_root), proof.challenge, proof.response)


def _response_bytes(challenge: SamplingChallenge, response) -> int:
    total = 8 * len(challenge.indices)
    for block, path in response.items:
        total += len(block.data) + 32 * len(path.siblings)
    return total


def run_audit_epoch(world: SimWorld, epoch: int, protocol: Optional[str] = None) -> list[AuditRecord]:
    return world.run_audit_epoch(epoch, protocol)


# ---------------------------------------------------------------------------
# Experiments and reports
# ---------------------------------------------------------------------------

@dataclass
class ReportRow:
    node_id: str
    identity: int
    behavior: str
    trials: int
    accepts: int
    rejects: int
    elapsed_total: int
    proof_bytes_total: int
    reject_reasons: dict[str, int]

    @property
    def accept_rate(self) -> float:
        return self.accepts / self.trials

    @property
    def detection_rate(self) -> float:
        return self.rejects / self.trials

    def to_dict(self) -> dict:
        return {
            "node_id": self.node_id,
            "identity": self.identity,
            "behavior": self.behavior,
            "trials": self.trials,
            "accepts": self.accepts,
            "rejects": self.rejects,
            "accept_rate": self.accept_rate,
            "detection_rate": self.detection_rate,
            "mean_elapsed": self.elapsed_total / self.trials,
            "mean_proof_bytes": self.proof_bytes_total / self.trials,
            "reject_reasons": dict(sorted(self.reject_reasons.items())),
        }


@dataclass
class DetectionReport:
    config: ExperimentConfig
    cost: CostModel
    rows: list[ReportRow]

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "cost_model": self.cost.to_dict(),
            "rows": [r.to_dict() for r in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            [
                "protocol", "k", "k_prime", "block_size", "trials",
                "node_id", "identity", "behavior",
                "accepts", "rejects", "accept_rate", "detection_rate",
                "mean_elapsed", "mean_proof_bytes",
            ]
        )
        cfg = self.config
        for r in self.rows:
            writer.writerow(
                [
                    cfg.protocol, cfg.k, cfg.k_prime, cfg.block_size, cfg.trials,
                    r.node_id, r.identity, r.behavior,
                    r.accepts, r.rejects, r.accept_rate, r.detection_rate,
                    r.elapsed_total / r.trials, r.proof_bytes_total / r.trials,
                ]
            )
        return buf.getvalue()


def _run_trial_range(config_dict: dict, start: int, stop: int, cost_dict: dict) -> dict:
    """Worker entry: build a world from scratch and run epochs [start, stop)."""
    config = ExperimentConfig.from_dict(config_dict)
    world = SimWorld(config, cost=CostModel.from_dict(cost_dict))
    acc: dict[tuple[str, int], dict] = {}
    for epoch in range(start, stop):
        for record in world.run_audit_epoch(epoch):
            key = (record.node_id, record.identity)
            slot = acc.get(key)
            if slot is None:
                slot = acc[key] = {
                    "behavior": behavior_label(world.nodes[record.node_id].behavior),
                    "trials": 0,
                    "accepts": 0,
                    "rejects": 0,
                    "elapsed_total": 0,
                    "proof_bytes_total": 0,
                    "reject_reasons": {},
                }
            slot["trials"] += 1
            if record.verdict == "accept":
                slot["accepts"] += 1
            else:
                slot["rejects"] += 1
                reasons = slot["reject_reasons"]
                reasons[record.reject_reason] = reasons.get(record.reject_reason, 0) + 1
            slot["elapsed_total"] += record.elapsed
            slot["proof_bytes_total"] += record.proof_bytes
        world.audit_log.clear()  # counts only; keep long runs flat
    return {f"{node_id}\x00{identity:06d}": slot for (node_id, identity), slot in acc.items()}


def run_experiment(config: ExperimentConfig, cost: Optional[CostModel] = None, workers: int = 1) -> DetectionReport:
    """Run config.trials independent audit epochs and aggregate a report.

    With workers > 1 the epoch range is split into contiguous chunks run in
    separate processes; every chunk derives identical state from the seed,
    and merging is pure summation, so the report matches a serial run
    byte for byte.
    """
    cost = cost or CostModel()
    cfg_dict = config.to_dict()
    cost_dict = cost.to_dict()
    if workers <= 1:
        partials = [_run_trial_range(cfg_dict, 0, config.trials, cost_dict)]
    else:
        bounds = [(config.trials * w) // workers for w in range(workers + 1)]
        chunks = [(bounds[w], bounds[w + 1]) for w in range(workers) if bounds[w] < bounds[w + 1]]
        with ProcessPoolExecutor(max_workers=len(chunks)) as pool:
            futures = [pool.submit(_run_trial_range, cfg_dict, lo, hi, cost_dict) for lo, hi in chunks]
            partials = [f.result() for f in futures]

    merged: dict[str, dict] = {}
    for partial in partials:
        for key, slot in partial.items():
            tgt = merged.get(key)
            if tgt is None:
                merged[key] = {**slot, "reject_reasons": dict(slot["reject_reasons"])}
                continue
            for field_name in ("trials", "accepts", "rejects", "elapsed_total", "proof_bytes_total"):
                tgt[field_name] += slot[field_name]
            for reason, count in slot["reject_reasons"].items():
                tgt["reject_reasons"][reason] = tgt["reject_reasons"].get(reason, 0) + count

    rows = []
    for key in sorted(merged):
        node_id, identity = key.split("\x00")
        slot = merged[key]
        rows.append(
            ReportRow(
                node_id=node_id,
                identity=int(identity),
                behavior=slot["behavior"],
                trials=slot["trials"],
                accepts=slot["accepts"],
                rejects=slot["rejects"],
                elapsed_total=slot["elapsed_total"],
                proof_bytes_total=slot["proof_bytes_total"],
                reject_reasons=slot["reject_reasons"],
            )
        )
    return DetectionReport(config=config, cost=cost, rows=rows)
