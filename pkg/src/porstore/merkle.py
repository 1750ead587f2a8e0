"""Content hashing and binary Merkle trees with membership proofs.

Hashing is SHA-256 with domain separation:

    leaf  = H(0x00 || index_le64 || data)
    inner = H(0x01 || left || right)

Binding the leaf index prevents block-reordering attacks; the distinct
prefixes prevent a 64-byte data block from forging an inner node.  A level
with an odd node count promotes the unpaired node unchanged (no duplicate
hashing), so the next level always holds ceil(n/2) digests.
"""

from __future__ import annotations

from dataclasses import dataclass
from hashlib import sha256

from .encoding import le64
from .errors import EmptyInput, IndexOutOfRange

LEAF_PREFIX = b"\x00"
INNER_PREFIX = b"\x01"

# 32-byte SHA-256 digests, compared byte-wise.
Digest = bytes


def hash_bytes(data: bytes) -> Digest:
    return sha256(data).digest()


@dataclass(frozen=True)
class Block:
    """One file block: index plus (padded) payload bytes."""

    index: int
    data: bytes


@dataclass(frozen=True)
class MerkleTree:
    """All levels of a binary tree, leaves first; levels[-1] is [root]."""

    leaf_count: int
    levels: tuple[tuple[Digest, ...], ...]

    @property
    def root(self) -> Digest:
        return self.levels[-1][0]


@dataclass(frozen=True)
class MerklePath:
    """Siblings from leaf to root; side is where the sibling sits."""

    leaf_index: int
    siblings: tuple[tuple[Digest, str], ...]  # (digest, "left" | "right")


def leaf_digest(block: Block) -> Digest:
    return hash_bytes(LEAF_PREFIX + le64(block.index) + block.data)


def inner_digest(left: Digest, right: Digest) -> Digest:
    return hash_bytes(INNER_PREFIX + left + right)


def build_tree(leaves: list[Block]) -> MerkleTree:
    """Build the full tree over the given blocks' leaf digests."""
    if not leaves:
        raise EmptyInput("cannot build a Merkle tree over zero blocks")
    level = [leaf_digest(b) for b in leaves]
    levels = [tuple(level)]
    while len(level) > 1:
        nxt = []
        for i in range(0, len(level) - 1, 2):
            nxt.append(inner_digest(level[i], level[i + 1]))
        if len(level) % 2:
            nxt.append(level[-1])  # odd node promoted unchanged
        level = nxt
        levels.append(tuple(level))
    return MerkleTree(leaf_count=len(leaves), levels=tuple(levels))


def prove_leaf(tree: MerkleTree, index: int) -> MerklePath:
    """Membership path for the leaf at `index`."""
    if not 0 <= index < tree.leaf_count:
        raise IndexOutOfRange(f"leaf index {index} not in [0, {tree.leaf_count})")
    siblings = []
    idx = index
    for level in tree.levels[:-1]:
        if idx % 2 == 1:
            siblings.append((level[idx - 1], "left"))
        elif idx + 1 < len(level):
            siblings.append((level[idx + 1], "right"))
        # else: promoted node, no sibling at this level
        idx //= 2
    return MerklePath(leaf_index=index, siblings=tuple(siblings))


def verify_leaf(root: Digest, block: Block, path: MerklePath) -> bool:
    """Accept iff folding the block's leaf digest through the path hits root."""
    if path.leaf_index != block.index:
        return False
    acc = leaf_digest(block)
    for digest, side in path.siblings:
        if side == "left":
            acc = inner_digest(digest, acc)
        elif side == "right":
            acc = inner_digest(acc, digest)
        else:
            return False
    return acc == root


def path_length(leaf_count: int, index: int) -> int:
    """Number of siblings on the path for `index`, from the shape alone."""
    if not 0 <= index < leaf_count:
        raise IndexOutOfRange(f"leaf index {index} not in [0, {leaf_count})")
    count = 0
    n = leaf_count
    idx = index
    while n > 1:
        if idx % 2 == 1 or idx + 1 < n:
            count += 1
        idx //= 2
        n = (n + 1) // 2
    return count


def tree_summary(tree: MerkleTree) -> dict:
    """Wire form of a tree: levels stay in memory, only the root travels."""
    return {"leaf_count": tree.leaf_count, "root_hex": tree.root.hex()}
