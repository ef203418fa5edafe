from linres.games.delayer import LowerBoundDelayer, MonitoredDelayer, StrategyParams, lower_bound_decide
from linres.games.engine import GameTask, lower_bound_delayer, monitor_invariants, play_game, play_paired, sweep
from linres.games.provers import make_prover
from linres.games.state import Branch, Choose, Fallback, GameKind, LinTreesMove, LinTreesPosition, TreelikeMove, TreelikePosition
from linres.games.transcript import GameTranscript, read_summary_csv, write_summary_csv, write_transcript
from linres.games.transfer import TransferDelayer, transfer_delayer

__all__ = [
    "Branch",
    "Choose",
    "Fallback",
    "GameKind",
    "GameTask",
    "GameTranscript",
    "LinTreesMove",
    "LinTreesPosition",
    "LowerBoundDelayer",
    "MonitoredDelayer",
    "StrategyParams",
    "TransferDelayer",
    "TreelikeMove",
    "TreelikePosition",
    "lower_bound_decide",
    "lower_bound_delayer",
    "make_prover",
    "monitor_invariants",
    "play_game",
    "play_paired",
    "read_summary_csv",
    "sweep",
    "transfer_delayer",
    "write_summary_csv",
    "write_transcript",
]
