"""Exception taxonomy shared by all protocol modules."""


class PorstoreError(Exception):
    """Base class for every error raised by this package."""


class EmptyInput(PorstoreError):
    """An operation that needs at least one element got none."""


class IndexOutOfRange(PorstoreError):
    """A leaf or block index falls outside the valid range."""


class NonceReplay(PorstoreError):
    """A one-shot nonce challenge was presented for verification twice."""


class InvalidParams(PorstoreError):
    """Parameters violate a protocol precondition."""


class RaggedInput(PorstoreError):
    """Blocks that must share a length do not."""


class InsufficientShards(PorstoreError):
    """Fewer erasure-code shards than the data count k."""


class DuplicateShard(PorstoreError):
    """Two erasure-code shards claim the same index."""


class InsufficientShares(PorstoreError):
    """Fewer secret shares than the threshold t."""


class DuplicateShare(PorstoreError):
    """Two secret shares claim the same evaluation point."""


class ConfigError(PorstoreError):
    """A simulation or CLI configuration references unknown entities."""
