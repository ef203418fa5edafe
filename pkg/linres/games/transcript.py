""" game transcripts and sweep summaries

transcript format:

    game <lintrees|treelike-reslin>
    round <i> prover <move> delayer <choose v|branch c1 c2 picked c> [fallback <cause>] pos <hash>
    ...
    branchings <n> reason <endgame|budget|fallback>
"""

import csv
from dataclasses import dataclass, field

from linres.errors import ParseError
from linres.games.state import Branch, Decision, GameKind

SUMMARY_COLUMNS = ("seed", "n", "k", "d", "rounds", "branchings", "reason")


@dataclass(frozen=True)
class Round:
    index: int
    move: str
    decision: Decision
    position: str

    def format(self):
        flag = f" fallback {self.decision.fallback}" if self.decision.fallback else ""
        return f"round {self.index} prover {self.move} delayer {self.decision.format()}{flag} pos {self.position}"


@dataclass
class GameTranscript:
    kind: GameKind
    rounds: list[Round] = field(default_factory=list)
    reason: str | None = None

    @property
    def branchings(self):
        return sum(1 for r in self.rounds if isinstance(r.decision, Branch))

    @property
    def fallbacks(self):
        return sum(1 for r in self.rounds if r.decision.fallback)

    def __len__(self):
        return len(self.rounds)

    def format(self):
        lines = [f"game {self.kind}"]
        lines += [r.format() for r in self.rounds]
        lines.append(f"branchings {self.branchings} reason {self.reason}")
        return "\n".join(lines) + "\n"


def write_transcript(transcript: GameTranscript, path):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(transcript.format())


def summary_row(transcript: GameTranscript, seed, instance, d):
    return {
        "seed": seed,
        "n": instance.n,
        "k": instance.k,
        "d": d,
        "rounds": len(transcript),
        "branchings": transcript.branchings,
        "reason": transcript.reason,
    }


def write_summary_csv(rows, stream):
    writer = csv.DictWriter(stream, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row)


def read_summary_csv(stream):
    """Rows written by `write_summary_csv`, with the numeric columns back as ints."""
    reader = csv.DictReader(stream)
    if tuple(reader.fieldnames or ()) != SUMMARY_COLUMNS:
        raise ParseError(f"expected summary header {','.join(SUMMARY_COLUMNS)}", 1)
    rows = []
    for lineno, raw in enumerate(reader, start=2):
        try:
            row = {name: int(raw[name]) for name in SUMMARY_COLUMNS if name != "reason"}
        except (TypeError, ValueError):
            raise ParseError("non-integer summary field", lineno) from None
        row["reason"] = raw["reason"]
        rows.append(row)
    return rows
