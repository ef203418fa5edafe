""" run configuration: enumeration budgets, retry limits and the per-invocation RunConfig """

import logging
import os
from dataclasses import dataclass, field
from typing import Any

from linres.errors import LinresError

logger = logging.getLogger(__name__)


# CONFIG

DEFAULT_BUDGET = 2**24          # max elements any single brute-force enumeration may touch
BUDGET_ENV = "LINRES_BUDGET"

MAX_RETRIES = 1000              # random-distance generator resampling limit
DEFAULT_MAX_ROUNDS = 200        # game length cap
ENUM_CHUNK = 1 << 16            # rows per chunk when enumerating cubes / field points
DEFAULT_JOBS = 1


# SUBCOMMANDS THAT CONSUME A SEED
RANDOMIZED_COMMANDS = frozenset({"gen", "play", "verify-lemma"})


def enumeration_budget(override=None):
    """Budget for brute-force enumerations: explicit override, then LINRES_BUDGET, then the default."""
    if override is not None:
        if override <= 0:
            raise LinresError(f"budget must be positive, got {override}")
        return override

    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_BUDGET

    try:
        value = int(raw)
    except ValueError:
        raise LinresError(f"{BUDGET_ENV} must be an integer, got {raw!r}") from None
    if value <= 0:
        raise LinresError(f"{BUDGET_ENV} must be positive, got {value}")

    logger.debug("enumeration budget from %s: %d", BUDGET_ENV, value)
    return value


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    instance_path: str | None = None
    proof_path: str | None = None
    output_path: str | None = None
    manifest_path: str | None = None
    p: int | None = None
    n: int | None = None
    k: int | None = None
    min_d: int | None = None
    seed: int | None = None
    budget: int = DEFAULT_BUDGET
    jobs: int = DEFAULT_JOBS
    strategy: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.budget <= 0:
            raise LinresError(f"budget must be positive, got {self.budget}")
        if self.jobs <= 0:
            raise LinresError(f"jobs must be positive, got {self.jobs}")
        if self.subcommand in RANDOMIZED_COMMANDS and self.seed is None:
            raise LinresError(f"{self.subcommand} needs --seed")

    @classmethod
    def from_args(cls, args):
        strategy = {
            name: getattr(args, name)
            for name in ("tau", "tau0", "s_max")
            if getattr(args, name, None) is not None
        }
        return cls(
            subcommand=args.command,
            instance_path=getattr(args, "instance", None),
            proof_path=getattr(args, "proof", None),
            output_path=getattr(args, "output", None),
            manifest_path=getattr(args, "manifest", None),
            p=getattr(args, "p", None),
            n=getattr(args, "n", None),
            k=getattr(args, "k", None),
            min_d=getattr(args, "min_d", None),
            seed=getattr(args, "seed", None),
            budget=enumeration_budget(getattr(args, "budget", None)),
            jobs=getattr(args, "jobs", DEFAULT_JOBS),
            strategy=strategy,
        )
