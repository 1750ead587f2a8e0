"""Command-line front end.

Exit codes: 0 success/accept, 1 protocol rejection, 2 usage or I/O error.
Every command takes randomness only through --seed flags (fresh entropy
otherwise, echoed in the output) and supports --json for machine-readable
stdout.  PORSTORE_COST_MODEL may name a JSON file overriding the default
simulated cost model.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .costs import CostModel, SimClock, TimingPolicy, default_t_max
from .encoding import le64
from .erasure import DEFAULT_REDUNDANCY, shard_byte_length, encode as rs_encode
from .errors import PorstoreError
from .merkle import Block, build_tree, hash_bytes
from .pos import (
    CodeParams,
    DEFAULT_BLOCK_SIZE,
    DEFAULT_K_PRIME,
    FileManifest,
    challenge_to_dict,
    derive_sampling_challenge,
    respond_sampling,
    verify_sampling,
    response_to_dict,
    split_blocks,
)
from .porep import DEFAULT_DELAY_ITERS, SealParams, replica_manifest_to_dict, seal_file, seal_params_from_dict
from .post import (
    DEFAULT_CHAIN_LENGTH,
    generate_post,
    post_from_dict,
    post_to_dict,
    transcript_stats,
    verify_post,
)
from .shamir import ShareParams, reconstruct, split_secret
from .sim import ExperimentConfig, run_experiment

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2


def _cost_model() -> CostModel:
    path = os.environ.get("PORSTORE_COST_MODEL")
    if path:
        return CostModel.from_json_file(path)
    return CostModel()


def _seed_bytes(value: str | None) -> bytes:
    return bytes.fromhex(value) if value else os.urandom(32)


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _read_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _emit(payload: dict, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _expected_block_len(manifest: FileManifest, index: int) -> int:
    if manifest.coding is None:
        return manifest.block_size
    return shard_byte_length(manifest.coding, manifest.block_size, index)


def _block_path(store_dir: str, manifest: FileManifest, index: int) -> str:
    kind = "shard" if manifest.coding is not None else "block"
    return os.path.join(store_dir, f"{manifest.file_id}.{kind}{index}")


def _load_store(store_dir: str, manifest: FileManifest) -> dict[int, bytes]:
    store = {}
    for i in range(manifest.k):
        path = _block_path(store_dir, manifest, i)
        if os.path.exists(path):
            with open(path, "rb") as fh:
                store[i] = fh.read()
    return store


# ---------------------------------------------------------------------------
# store
# ---------------------------------------------------------------------------

def cmd_store(args) -> int:
    with open(args.file, "rb") as fh:
        data = fh.read()
    file_id = args.file_id or os.path.basename(args.file)
    os.makedirs(args.out_dir, exist_ok=True)

    if args.code:
        if len(args.code) == 1:
            k_data, n_total = args.code[0], DEFAULT_REDUNDANCY * args.code[0]
        elif len(args.code) == 2:
            k_data, n_total = args.code
        else:
            raise PorstoreError("--code takes K_DATA [N_TOTAL]")
        block_count = -(-len(data) // args.block_size)
        if block_count != k_data:
            raise PorstoreError(
                f"--code k_data={k_data} but the file splits into {block_count} blocks of {args.block_size}"
            )
        raw = [b.data for b in split_blocks(data, args.block_size)]
        encoded = rs_encode(raw, CodeParams(k_data, n_total))
        blocks = [Block(i, shard) for i, shard in encoded.shards]
        coding = CodeParams(k_data, n_total)
    else:
        blocks = split_blocks(data, args.block_size)
        coding = None

    tree = build_tree(blocks)
    manifest = FileManifest(
        file_id=file_id,
        total_length=len(data),
        block_size=args.block_size,
        k=len(blocks),
        merkle_root=tree.root,
        coding=coding,
    )
    for b in blocks:
        with open(_block_path(args.out_dir, manifest, b.index), "wb") as fh:
            fh.write(b.data)
    manifest_path = os.path.join(args.out_dir, f"{file_id}.manifest.json")
    _write_json(manifest_path, manifest.to_dict())

    payload = {"manifest": manifest.to_dict(), "manifest_path": manifest_path, "blocks_written": len(blocks)}
    _emit(payload, args.json, [
        f"stored {file_id}: {len(blocks)} {'shards' if coding else 'blocks'} of {args.block_size} B",
        f"merkle root {manifest.merkle_root.hex()}",
        f"manifest written to {manifest_path}",
    ])
    return EXIT_OK


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------

def cmd_audit(args) -> int:
    manifest = FileManifest.from_dict(_read_json(args.manifest))
    store = _load_store(args.store_dir, manifest)
    seed = _seed_bytes(args.seed)
    challenge = derive_sampling_challenge(seed, args.epoch, manifest.k, args.k_prime)

    # The prover's best-effort tree: zero stand-ins for anything missing.
    leaves = [
        Block(i, store.get(i, b"\x00" * _expected_block_len(manifest, i)))
        for i in range(manifest.k)
    ]
    tree = build_tree(leaves)
    response = respond_sampling(store, tree, challenge)
    ok = verify_sampling(manifest, challenge, response)

    transcript_dir = args.transcript_dir or args.store_dir
    os.makedirs(transcript_dir, exist_ok=True)
    challenge_path = os.path.join(transcript_dir, f"{manifest.file_id}.challenge.{args.epoch}.json")
    response_path = os.path.join(transcript_dir, f"{manifest.file_id}.response.{args.epoch}.json")
    _write_json(challenge_path, challenge_to_dict(manifest, challenge, args.k_prime))
    _write_json(response_path, response_to_dict(response))

    payload = {
        "verdict": "accept" if ok else "reject",
        "seed_hex": seed.hex(),
        "epoch": args.epoch,
        "indices": list(challenge.indices),
        "challenge_path": challenge_path,
        "response_path": response_path,
    }
    _emit(payload, args.json, [
        f"challenge seed {seed.hex()} epoch {args.epoch}",
        f"indices {list(challenge.indices)}",
        f"verdict: {'ACCEPT' if ok else 'REJECT'}",
    ])
    return EXIT_OK if ok else EXIT_REJECT


# ---------------------------------------------------------------------------
# seal
# ---------------------------------------------------------------------------

def cmd_seal(args) -> int:
    manifest = FileManifest.from_dict(_read_json(args.manifest))
    store = _load_store(args.store_dir, manifest)
    if len(store) != manifest.k:
        raise PorstoreError(f"store is missing {manifest.k - len(store)} of {manifest.k} blocks")
    salt = _seed_bytes(args.salt)
    params = SealParams(delay_iters=args.delay_iters, node_tag=args.node_tag.encode(), salt=salt)
    blocks = [Block(i, store[i]) for i in range(manifest.k)]
    replica = seal_file(blocks, params)

    os.makedirs(args.out_dir, exist_ok=True)
    for i, sealed in enumerate(replica.sealed_blocks):
        with open(os.path.join(args.out_dir, f"{manifest.file_id}.sealed{i}"), "wb") as fh:
            fh.write(sealed)
    replica_manifest = replica_manifest_to_dict(manifest.file_id, replica)
    replica_path = os.path.join(args.out_dir, f"{manifest.file_id}.replica.json")
    _write_json(replica_path, replica_manifest)

    payload = {"replica_manifest": replica_manifest, "replica_manifest_path": replica_path, "salt_hex": salt.hex()}
    _emit(payload, args.json, [
        f"sealed {manifest.k} blocks under tag {args.node_tag!r} (d={args.delay_iters})",
        f"replica root {replica.replica_root.hex()}",
        f"replica manifest written to {replica_path}",
    ])
    return EXIT_OK


def _load_replica(args, manifest: FileManifest):
    replica_manifest = _read_json(args.replica_manifest)
    params = seal_params_from_dict(replica_manifest)
    sealed = []
    for i in range(manifest.k):
        path = os.path.join(args.replica_dir, f"{manifest.file_id}.sealed{i}")
        with open(path, "rb") as fh:
            sealed.append(fh.read())
    from .porep import Replica

    return replica_manifest, Replica(
        params=params,
        sealed_blocks=tuple(sealed),
        replica_root=bytes.fromhex(replica_manifest["replica_root_hex"]),
    )


# ---------------------------------------------------------------------------
# post gen / verify / stats
# ---------------------------------------------------------------------------

def cmd_post_gen(args) -> int:
    manifest = FileManifest.from_dict(_read_json(args.manifest))
    _, replica = _load_replica(args, manifest)
    c0 = bytes.fromhex(args.c0) if args.c0 else hash_bytes(replica.replica_root + le64(args.epoch))
    cost = _cost_model()
    post = generate_post(replica, c0, args.length, SimClock(), cost, k_prime=args.k_prime)
    _write_json(args.out, post_to_dict(post))
    payload = {"c0_hex": c0.hex(), "length": post.length, "total_cost": post.total_cost, "transcript_path": args.out}
    _emit(payload, args.json, [
        f"generated chain of {post.length} proofs, total simulated cost {post.total_cost}",
        f"transcript written to {args.out}",
    ])
    return EXIT_OK


def cmd_post_verify(args) -> int:
    manifest = FileManifest.from_dict(_read_json(args.manifest))
    replica_manifest = _read_json(args.replica_manifest)
    replica_root = bytes.fromhex(replica_manifest["replica_root_hex"])
    post = post_from_dict(_read_json(args.transcript))
    cost = _cost_model()
    k_prime = args.k_prime or (len(post.proofs[0].challenge.indices) if post.proofs else DEFAULT_K_PRIME)
    t_max = args.t_max if args.t_max is not None else default_t_max(k_prime, cost)
    policy = TimingPolicy(
        t_max=t_max,
        k_prime=k_prime,
        expected_cost=cost if args.strict else None,
        contiguous=args.strict,
    )
    ok = verify_post(manifest, replica_root, post, policy)
    payload = {"verdict": "accept" if ok else "reject", "t_max": t_max, "k_prime": k_prime, "strict": args.strict}
    _emit(payload, args.json, [f"verdict: {'ACCEPT' if ok else 'REJECT'} (t_max={t_max}, strict={args.strict})"])
    return EXIT_OK if ok else EXIT_REJECT


def cmd_post_stats(args) -> int:
    post = post_from_dict(_read_json(args.transcript))
    stats = transcript_stats(post)
    stats["transcript_file_bytes"] = os.path.getsize(args.transcript)
    _emit(stats, args.json, [
        f"chain length {stats['length']}, total simulated cost {stats['total_cost']}",
        f"canonical proof bytes: total {stats['total_bytes']}, mean {stats['mean_proof_bytes']}",
        f"transcript file: {stats['transcript_file_bytes']} B",
    ])
    return EXIT_OK


# ---------------------------------------------------------------------------
# share split / join
# ---------------------------------------------------------------------------

def cmd_share_split(args) -> int:
    with open(args.file, "rb") as fh:
        data = fh.read()
    seed = _seed_bytes(args.seed)
    params = ShareParams(threshold=args.threshold, share_count=args.shares)
    share_set = split_secret(data, params, seed)
    os.makedirs(args.out_dir, exist_ok=True)
    base = os.path.basename(args.file)
    paths = []
    for x, ys in share_set.shares:
        payload = {
            "params": {
                "threshold": params.threshold,
                "share_count": params.share_count,
                "field_modulus": str(params.field_modulus),
            },
            "x": x,
            "y_values": [str(y) for y in ys],
            "original_length": len(data),
        }
        path = os.path.join(args.out_dir, f"{base}.share{x}.json")
        _write_json(path, payload)
        paths.append(path)
    _emit(
        {"seed_hex": seed.hex(), "share_paths": paths},
        args.json,
        [f"split into {params.share_count} shares (threshold {params.threshold}), seed {seed.hex()}"]
        + [f"  {p}" for p in paths],
    )
    return EXIT_OK


def cmd_share_join(args) -> int:
    shares = []
    params = None
    original_length = None
    for path in args.shares:
        d = _read_json(path)
        p = ShareParams(
            threshold=d["params"]["threshold"],
            share_count=d["params"]["share_count"],
            field_modulus=int(d["params"]["field_modulus"]),
        )
        if params is None:
            params, original_length = p, d["original_length"]
        elif p != params or d["original_length"] != original_length:
            raise PorstoreError(f"share file {path} disagrees with the others")
        shares.append((d["x"], tuple(int(y) for y in d["y_values"])))
    data = reconstruct(shares, params, original_length)
    with open(args.out, "wb") as fh:
        fh.write(data)
    _emit(
        {"out": args.out, "bytes": len(data)},
        args.json,
        [f"reconstructed {len(data)} B into {args.out}"],
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# experiment
# ---------------------------------------------------------------------------

def cmd_experiment(args) -> int:
    config = ExperimentConfig.from_dict(_read_json(args.config))
    report = run_experiment(config, cost=_cost_model(), workers=args.workers)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(report.to_json())
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(report.to_csv())
    if args.json:
        print(report.to_json(), end="")
    else:
        print(f"protocol {config.protocol}: {config.trials} trials, {len(report.rows)} prover lanes")
        header = f"{'node':<16}{'id':>3}  {'behavior':<12}{'accepts':>8}{'rejects':>8}{'accept_rate':>12}{'mean_elapsed':>13}"
        print(header)
        for row in report.rows:
            print(
                f"{row.node_id:<16}{row.identity:>3}  {row.behavior:<12}"
                f"{row.accepts:>8}{row.rejects:>8}{row.accept_rate:>12.6f}"
                f"{row.elapsed_total / row.trials:>13.1f}"
            )
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="porstore", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("store", help="split a file into (optionally coded) blocks and commit to them")
    p.add_argument("file")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--block-size", type=int, default=DEFAULT_BLOCK_SIZE)
    p.add_argument("--code", nargs="+", type=int, metavar="K_DATA [N_TOTAL]",
                   help="erasure-code into N_TOTAL shards (default redundancy 2x)")
    p.add_argument("--file-id")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_store)

    p = sub.add_parser("audit", help="run one sampled audit against a stored file")
    p.add_argument("manifest")
    p.add_argument("--store-dir", required=True)
    p.add_argument("--k-prime", type=int, default=DEFAULT_K_PRIME)
    p.add_argument("--seed", help="32-byte hex challenge seed (default: fresh entropy)")
    p.add_argument("--epoch", type=int, default=0)
    p.add_argument("--transcript-dir")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_audit)

    p = sub.add_parser("seal", help="seal stored blocks into an identity-bound replica")
    p.add_argument("manifest")
    p.add_argument("--store-dir", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--node-tag", required=True)
    p.add_argument("--salt", help="32-byte hex (default: fresh entropy)")
    p.add_argument("--delay-iters", type=int, default=DEFAULT_DELAY_ITERS)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_seal)

    post_parser = sub.add_parser("post", help="proof-of-spacetime chains")
    post_sub = post_parser.add_subparsers(dest="post_command", required=True)

    p = post_sub.add_parser("gen", help="generate a chained proof transcript")
    p.add_argument("--manifest", required=True)
    p.add_argument("--replica-manifest", required=True)
    p.add_argument("--replica-dir", required=True)
    p.add_argument("--c0", help="32-byte hex initial challenge (default: derived from replica root and --epoch)")
    p.add_argument("--epoch", type=int, default=0)
    p.add_argument("--length", type=int, default=DEFAULT_CHAIN_LENGTH)
    p.add_argument("--k-prime", type=int, default=DEFAULT_K_PRIME)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_post_gen)

    p = post_sub.add_parser("verify", help="verify a chained proof transcript offline")
    p.add_argument("--manifest", required=True)
    p.add_argument("--replica-manifest", required=True)
    p.add_argument("--transcript", required=True)
    p.add_argument("--t-max", type=int)
    p.add_argument("--k-prime", type=int)
    p.add_argument("--strict", action="store_true", help="bind timestamps exactly to the cost model")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_post_verify)

    p = post_sub.add_parser("stats", help="report chain transcript sizes and cost")
    p.add_argument("--transcript", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_post_stats)

    share_parser = sub.add_parser("share", help="threshold secret sharing")
    share_sub = share_parser.add_subparsers(dest="share_command", required=True)

    p = share_sub.add_parser("split", help="split a file into t-of-n shares")
    p.add_argument("file")
    p.add_argument("--threshold", type=int, required=True)
    p.add_argument("--shares", type=int, required=True)
    p.add_argument("--seed", help="32-byte hex (default: fresh entropy)")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_share_split)

    p = share_sub.add_parser("join", help="reconstruct a file from shares")
    p.add_argument("shares", nargs="+")
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_share_join)

    p = sub.add_parser("experiment", help="run a seeded detection experiment")
    p.add_argument("config")
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--csv", help="write the CSV report here")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_experiment)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PorstoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
