""" Delayer transfer from LinTrees games to tree-like Res(lin) games

The host (tree-like) game is shadowed by a LinTrees game on the same instance. Every host
inequality f != a is paired with one shadow equation f = a' (a != a'), either added in the
shadow game or lying in its span. The initial 0 != a pair with 0 = 0.

Host Prover cites h != a (paired with h = a') and splits it into f != b, g != c. The shadow
Prover proposes f:
    shadow chooses f = b'      -> host takes f != b if b != b', else g != c (paired g = c + a' - a)
    shadow branches b1, b2     -> host branches; the shadow pick follows the host pick
Once the shadow game is over the host keeps choosing the first side.
"""

import logging

from linres.gf import AffinePoly
from linres.games.state import Branch, Choose, GameKind, LinTreesMove, LinTreesPosition
from linres.games.transcript import GameTranscript, Round

logger = logging.getLogger(__name__)


class TransferDelayer:
    kind = GameKind.TREELIKE

    def __init__(self, inner):
        self.inner = inner

    def start(self, position, rng):
        self.shadow = LinTreesPosition(position.instance)
        self.shadow_transcript = GameTranscript(GameKind.LINTREES)
        self.shadow_over_at = None
        # host inequality vector -> shadow value a' of the same form
        self.pairing = {q.vector: 0 for q in position.inequalities}
        self.inner.start(self.shadow, rng)
        self._pending = None

    def _shadow_value(self, poly: AffinePoly):
        return self.pairing[poly.vector]

    def decide(self, position, move):
        if self.shadow.is_over():
            self._pending = None
            return Choose(0)
        shadow_move = LinTreesMove(move.first.coeffs)
        decision = self.inner.decide(self.shadow, shadow_move)
        self._pending = (shadow_move, decision)
        if isinstance(decision, Branch):
            return Branch((0, 1), fallback=decision.fallback)
        b = move.first.rhs
        return Choose(0 if b != decision.value else 1, fallback=decision.fallback)

    def observe(self, position, move, decision):
        if self._pending is None:
            return
        shadow_move, shadow_decision = self._pending
        self._pending = None

        a, a_prime = move.pivot.rhs, self._shadow_value(move.pivot)
        b = move.first.rhs
        p = position.field.p
        side = decision.value if isinstance(decision, Choose) else decision.picked

        def shadow_pick(values):
            if side == 0:
                return next(v for v in values if v != b)
            return next(v for v in values if v != (b + a_prime - a) % p)

        played = self.shadow.apply(shadow_move, shadow_decision, shadow_pick)
        b_prime = played.value if isinstance(played, Choose) else played.picked
        if side == 0:
            self.pairing[move.first.vector] = b_prime
        else:
            # h = a' and f = b' in the shadow force g = a' - b'
            self.pairing[move.second.vector] = (a_prime - b_prime) % p

        self.shadow_transcript.rounds.append(
            Round(len(self.shadow_transcript), shadow_move.format(), played, self.shadow.digest())
        )
        if self.shadow.is_over():
            self.shadow_over_at = len(position.inequalities)
            self.shadow_transcript.reason = "fallback" if self.shadow_transcript.fallbacks else "endgame"
            logger.debug("shadow game over after %d rounds", len(self.shadow_transcript))

    def finish(self):
        if self.shadow_transcript.reason is None:
            self.shadow_transcript.reason = "budget"
        return self.shadow_transcript


def transfer_delayer(inner):
    return TransferDelayer(inner)
