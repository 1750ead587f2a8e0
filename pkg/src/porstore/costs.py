"""Simulated time: the cost model and clock behind every timed proof.

All timing in this package is simulated, not wall-clock.  Provers charge
costs (in abstract units) to a SimClock; verifiers judge the recorded
timestamps against a TimingPolicy.  This keeps the timing arguments exact
and the test suite deterministic: what matters is the cost *ratio* between
an honest read and an on-demand reseal or remote fetch, and that ratio is
preserved by construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidParams


@dataclass(frozen=True)
class CostModel:
    """Unit costs; fetch_remote_cost > block_read_cost is what makes
    outsourcing detectable at all."""

    hash_cost: int = 1
    block_read_cost: int = 2
    network_latency: int = 5
    fetch_remote_cost: int = 50

    def __post_init__(self):
        if min(self.hash_cost, self.block_read_cost, self.network_latency, self.fetch_remote_cost) < 0:
            raise InvalidParams("costs must be non-negative")
        if self.fetch_remote_cost <= self.block_read_cost:
            raise InvalidParams("fetch_remote_cost must exceed block_read_cost")

    def to_dict(self) -> dict:
        return {
            "hash_cost": self.hash_cost,
            "block_read_cost": self.block_read_cost,
            "network_latency": self.network_latency,
            "fetch_remote_cost": self.fetch_remote_cost,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CostModel":
        return cls(**d)

    @classmethod
    def from_json_file(cls, path: str) -> "CostModel":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


class SimClock:
    """Monotone simulated clock owned by one execution lane."""

    def __init__(self, start: int = 0):
        self.now = start

    def advance(self, units: int) -> None:
        if units < 0:
            raise InvalidParams("clock cannot run backwards")
        self.now += units


@dataclass(frozen=True)
class TimingPolicy:
    """Verifier-side acceptance window for proof generation time.

    t_max is the basic upper bound: slower proofs are evidence of
    on-demand resealing or remote fetches.  The strict knobs bind the
    recorded timestamps exactly, so a transcript cannot be nudged by a
    byte without rejection: expected_cost requires each proof's elapsed
    time to equal the honest cost for its challenge, and contiguous
    requires chained proofs to start the instant the previous one ends.
    """

    t_max: int
    k_prime: Optional[int] = None
    expected_cost: Optional[CostModel] = None
    contiguous: bool = False


def default_t_max(k_prime: int, cost: CostModel) -> int:
    """Shipped default: 10x the raw read budget of an honest response."""
    return 10 * k_prime * cost.block_read_cost


def default_policy(k_prime: int, cost: Optional[CostModel] = None) -> TimingPolicy:
    cost = cost or CostModel()
    return TimingPolicy(t_max=default_t_max(k_prime, cost), k_prime=k_prime)
