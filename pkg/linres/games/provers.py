""" prover strategies: random-legal (seeded), greedy-narrow, scripted replay """

from linres.errors import IllegalMove, LinresError
from linres.gf import AffinePoly, FMatrix, rank, solve
from linres.games.state import GameKind, LinTreesMove, TreelikeMove


def undetermined_variables(position):
    """Variables x_j whose value is not fixed by the linear parts of H."""
    n, F = position.n, position.field
    rows = [q.coeffs for q in position.equations()]
    base = rank(FMatrix(rows, F)) if rows else 0
    free = []
    for j in range(n):
        unit = tuple(1 if i == j else 0 for i in range(n))
        if rank(FMatrix(rows + [unit], F)) > base:
            free.append(j)
    return free


class Prover:
    kind = GameKind.LINTREES

    def start(self, position, rng):
        self.rng = rng


# LINTREES

class RandomLegalProver(Prover):
    """Undetermined forms of weight 1 or 2 with random nonzero coefficients."""

    def propose(self, position):
        n, p = position.n, position.field.p
        free = undetermined_variables(position)
        if not free:
            free = list(range(n))
        size = 1 if len(free) == 1 else int(self.rng.integers(1, 3))
        support = sorted(int(j) for j in self.rng.choice(free, size=size, replace=False))
        form = [0] * n
        for j in support:
            form[j] = int(self.rng.integers(1, p))
        return LinTreesMove(tuple(form))

    def pick(self, position, move, values):
        return values[int(self.rng.integers(0, 2))]


class GreedyNarrowProver(Prover):
    """The lightest form that H does not determine yet: the first undetermined variable.
    Once H fixes every variable, the first one fixed to a value outside {0, 1}."""

    def propose(self, position):
        n = position.n
        free = undetermined_variables(position)
        if free:
            j = free[0]
        else:
            H = position.equations()
            x = solve(FMatrix([q.coeffs for q in H], position.field), [q.rhs for q in H])
            j = next((i for i, v in enumerate(x or ()) if v not in (0, 1)), 0)
        return LinTreesMove(tuple(1 if i == j else 0 for i in range(n)))

    def pick(self, position, move, values):
        return values[0]


class ScriptedProver(Prover):
    def __init__(self, forms, picks=()):
        self.forms = [tuple(f) for f in forms]
        self.picks = list(picks)

    def start(self, position, rng):
        super().start(position, rng)
        self._moves = iter(self.forms)
        self._picks = iter(self.picks)

    def propose(self, position):
        try:
            return LinTreesMove(next(self._moves))
        except StopIteration:
            raise IllegalMove("scripted prover ran out of moves") from None

    def pick(self, position, move, values):
        try:
            return next(self._picks)
        except StopIteration:
            raise IllegalMove("scripted prover ran out of branch picks") from None


# TREE-LIKE RES(LIN)

class RandomTreelikeProver(Prover):
    """Cites a random inequality h != c and peels off x_j - a for random j and a."""

    kind = GameKind.TREELIKE

    def propose(self, position):
        n, F = position.n, position.field
        pivot = position.inequalities[int(self.rng.integers(0, len(position.inequalities)))]
        j = int(self.rng.integers(0, n))
        a = int(self.rng.integers(0, 2))
        first = AffinePoly.variable(j, n, F, a)
        return TreelikeMove(pivot, first, pivot - first)

    def pick(self, position, move):
        return int(self.rng.integers(0, 2))


class ScriptedTreelikeProver(Prover):
    kind = GameKind.TREELIKE

    def __init__(self, moves, picks=()):
        self.moves = list(moves)
        self.picks = list(picks)

    def start(self, position, rng):
        super().start(position, rng)
        self._moves = iter(self.moves)
        self._picks = iter(self.picks)

    def propose(self, position):
        try:
            return next(self._moves)
        except StopIteration:
            raise IllegalMove("scripted prover ran out of moves") from None

    def pick(self, position, move):
        try:
            return next(self._picks)
        except StopIteration:
            raise IllegalMove("scripted prover ran out of branch picks") from None


PROVERS = {
    (GameKind.LINTREES, "random-legal"): RandomLegalProver,
    (GameKind.LINTREES, "greedy-narrow"): GreedyNarrowProver,
    (GameKind.TREELIKE, "random-legal"): RandomTreelikeProver,
}


def make_prover(name, kind=GameKind.LINTREES):
    try:
        return PROVERS[(GameKind(kind), name)]()
    except (KeyError, ValueError):
        raise LinresError(f"no {name!r} prover for {kind} games") from None
