""" game loop for both Prover-Delayer games, the invariant monitor and parallel sweeps """

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from linres.config import DEFAULT_JOBS, DEFAULT_MAX_ROUNDS
from linres.errors import IllegalMove, NotUnsat
from linres.games.delayer import LowerBoundDelayer, MonitoredDelayer, StrategyParams
from linres.games.provers import make_prover
from linres.games.state import GameKind, LinTreesPosition, TreelikePosition
from linres.games.transcript import GameTranscript, Round, summary_row
from linres.games.transfer import TransferDelayer
from linres.instances import LinearSystem, code_distance, zero_one_sat

logger = logging.getLogger(__name__)


def _system(inst) -> LinearSystem:
    return getattr(inst, "system", inst)


def _start_position(system, kind):
    if kind == GameKind.LINTREES:
        return LinTreesPosition(system)
    return TreelikePosition(system)


def play_game(inst, prover, delayer, kind=GameKind.LINTREES, seed=None, max_rounds=DEFAULT_MAX_ROUNDS, budget=None):
    """Alternate Prover and Delayer until the endgame of `kind` or `max_rounds`."""
    system = _system(inst)
    kind = GameKind(kind)
    witness = zero_one_sat(system, budget)
    if witness is not None:
        raise NotUnsat(witness)
    if prover.kind != kind or delayer.kind != kind:
        raise IllegalMove(f"strategies for {prover.kind}/{delayer.kind} cannot play a {kind} game")

    rng = np.random.default_rng(seed)
    position = _start_position(system, kind)
    prover.start(position, rng)
    delayer.start(position, rng)
    transcript = GameTranscript(kind)

    while not position.is_over() and len(transcript) < max_rounds:
        move = prover.propose(position)
        decision = delayer.decide(position, move)
        if kind == GameKind.LINTREES:
            played = position.apply(move, decision, lambda values: prover.pick(position, move, values))
        else:
            played = position.apply(move, decision, lambda: prover.pick(position, move))
        delayer.observe(position, move, played)
        transcript.rounds.append(Round(len(transcript), move.format(), played, position.digest()))
        logger.debug("round %d: %s -> %s", len(transcript) - 1, move.format(), played.format())

    if not position.is_over():
        transcript.reason = "budget"
    elif transcript.fallbacks:
        transcript.reason = "fallback"
    else:
        transcript.reason = "endgame"
    logger.info("%s game over after %d rounds: %d branchings, %s", kind, len(transcript), transcript.branchings, transcript.reason)
    return transcript


# LINTREES DELAYER DEFAULTS

def lower_bound_delayer(inst, d=None, budget=None, **overrides):
    """LowerBoundDelayer with parameters derived from the instance distance unless overridden."""
    system = _system(inst)
    if d is None:
        d = getattr(inst, "d", None)
    if d is None:
        d = code_distance(system.A, budget)
    params = StrategyParams.for_distance(d, system.p, **overrides)
    return LowerBoundDelayer(params, budget)


def monitor_invariants(inst, prover, params: StrategyParams, seed=None, max_rounds=DEFAULT_MAX_ROUNDS, budget=None):
    """Play the lower-bound delayer against `prover` and return (transcript, per-round invariant records)."""
    monitored = MonitoredDelayer(LowerBoundDelayer(params, budget), params, budget)
    transcript = play_game(inst, prover, monitored, GameKind.LINTREES, seed, max_rounds, budget)
    return transcript, monitored.records


def play_paired(inst, host_prover, inner, seed=None, max_rounds=DEFAULT_MAX_ROUNDS, budget=None):
    """Tree-like Res(lin) game played by the transferred `inner` delayer; returns (host, shadow)."""
    delayer = TransferDelayer(inner)
    host = play_game(inst, host_prover, delayer, GameKind.TREELIKE, seed, max_rounds, budget)
    return host, delayer.finish()


# SWEEPS

@dataclass(frozen=True)
class GameTask:
    system: LinearSystem
    d: int
    seed: int
    prover: str = "random-legal"
    kind: GameKind = GameKind.LINTREES
    max_rounds: int = DEFAULT_MAX_ROUNDS
    budget: int | None = None
    overrides: dict = field(default_factory=dict)


def _play_one(task: GameTask):
    prover = make_prover(task.prover, task.kind)
    inner = lower_bound_delayer(task.system, task.d, task.budget, **task.overrides)
    if task.kind == GameKind.LINTREES:
        transcript = play_game(task.system, prover, inner, task.kind, task.seed, task.max_rounds, task.budget)
    else:
        transcript, _ = play_paired(task.system, prover, inner, task.seed, task.max_rounds, task.budget)
    return transcript, summary_row(transcript, task.seed, task.system, task.d)


def sweep(tasks, jobs=DEFAULT_JOBS):
    """Play every task; results come back in task order whatever `jobs` is."""
    tasks = list(tasks)
    if jobs <= 1 or len(tasks) <= 1:
        return [_play_one(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_play_one, tasks))
