"""Moment-matrix relaxations giving certified quantum upper bounds.

Each party's measurement operators become noncommuting letters; words of
letters index moments Tr(rho . word).  A word is canonical once letters
are grouped by party (different parties commute), adjacent equal letters
are collapsed (projectors square to themselves), and words with adjacent
same-input different-outcome letters are dropped as zero (orthogonal
projectors annihilate).  Moments are real here, so a word and its adjoint
share a variable: the adjoint reverses each party's subword, and the
canonical representative is the lexicographic minimum of the two.

One outcome per input is eliminated up front: its projector is identity
minus the others, which shrinks the letter set and reappears in the
objective as an affine constant plus sign-flipped terms.

The moment matrix is indexed by a generating set of words.  Level 1 uses
single letters, level 1+ab adds products across distinct parties (one
letter per party), level 2 adds same-party pairs.  For more than two
parties, level 2 here includes the 1+ab set, keeping the levels nested.
"""

from dataclasses import dataclass
from itertools import combinations, product

from . import sdp


class NpaSizeError(ValueError):
    """Relaxation exceeds in-process guards; build for export instead."""


LEVELS = ("1", "1+ab", "2")
MAX_LETTERS_LEVEL2 = 40


def normalize_level(level):
    name = str(level).strip().lower()
    if name == "almost-quantum":
        name = "1+ab"
    if name not in LEVELS:
        raise ValueError(f"unknown level {level!r}: expected 1, 1+ab, or 2")
    return name


@dataclass(frozen=True)
class Monomial:
    word: tuple  # letters (party, input, outcome), grouped by party
    canonical: bool = True

    def __len__(self):
        return len(self.word)


@dataclass(frozen=True)
class MomentRelaxation:
    level: str
    monomials: tuple       # canonical words (per-party subword form), index order
    index: dict            # canonical word -> variable id; empty word is id 0
    objective: tuple       # coefficient per variable id (id 0 entry unused)
    constant: float
    block_size: int
    letters: tuple         # per party, the letter list ((input, outcome), ...)


def _canon_subword(w):
    out = []
    for let in w:
        if out and out[-1] == let:
            continue
        if out and out[-1][0] == let[0] and out[-1][1] != let[1]:
            return None
        out.append(let)
    return tuple(out)


def _canon_parts(parts):
    cw = []
    for w in parts:
        c = _canon_subword(w)
        if c is None:
            return None
        cw.append(c)
    w = tuple(cw)
    wr = tuple(tuple(reversed(sw)) for sw in cw)
    return min(w, wr)


def _parts_to_letters(parts):
    return tuple((p, x, a) for p, sw in enumerate(parts) for (x, a) in sw)


def canonicalize(letters, parties=None):
    """Canonical Monomial of a letter sequence, or None when it collapses to zero.

    letters: iterable of (party, input, outcome).  Party grouping is a
    stable sort, preserving the operator order within each party.
    """
    letters = list(letters)
    if parties is None:
        parties = max((p for (p, _, _) in letters), default=-1) + 1
    parts = [[] for _ in range(parties)]
    for (p, x, a) in letters:
        parts[p].append((x, a))
    canon = _canon_parts(tuple(tuple(sw) for sw in parts))
    if canon is None:
        return None
    return Monomial(word=_parts_to_letters(canon))


def party_letters(game):
    """Per party: one letter per (input, outcome) pair, last outcome dropped."""
    letters = tuple((x, a) for x in range(game.n)
                    for a in game.outcome_sets[x][:-1])
    return (letters,) * game.r


def generating_set(game, level):
    """Canonical generating words (per-party subword form), empty word first."""
    level = normalize_level(level)
    letters = party_letters(game)
    r = game.r
    shapes = [tuple(0 for _ in range(r))]
    for p in range(r):
        shapes.append(tuple(1 if q == p else 0 for q in range(r)))
    if level in ("1+ab", "2"):
        for k in range(2, r + 1):
            for ps in combinations(range(r), k):
                shapes.append(tuple(1 if q in ps else 0 for q in range(r)))
    if level == "2":
        for p in range(r):
            shapes.append(tuple(2 if q == p else 0 for q in range(r)))
    gens = []
    seen = set()
    for shape in shapes:
        pools = []
        for p in range(r):
            if shape[p] == 0:
                pools.append([()])
            elif shape[p] == 1:
                pools.append([(l,) for l in letters[p]])
            else:
                pools.append([(l1, l2) for l1 in letters[p] for l2 in letters[p]])
        for parts in product(*pools):
            canon = []
            dead = False
            for sw in parts:
                c = _canon_subword(sw)
                if c is None or len(c) < len(sw):
                    dead = True  # collapses into a shorter shape already present
                    break
                canon.append(c)
            if dead:
                continue
            key = tuple(canon)
            if key not in seen:
                seen.add(key)
                gens.append(key)
    return gens


def monomials(game, level):
    """generating_set as public Monomial objects."""
    return [Monomial(word=_parts_to_letters(g)) for g in generating_set(game, level)]


def _expansions(game):
    """Per (party-independent) input/outcome: P(a|x) as [(sign, letter or None)]."""
    table = {}
    for x in range(game.n):
        outs = game.outcome_sets[x]
        for a in outs[:-1]:
            table[(x, a)] = ((1.0, (x, a)),)
        last = outs[-1]
        terms = [(1.0, None)]
        for a in outs[:-1]:
            terms.append((-1.0, (x, a)))
        table[(x, last)] = tuple(terms)
    return table


def build_relaxation(game, level, max_letters=None):
    """Moment relaxation and its standard-form SDP.

    The empty-word moment is pinned to 1 by folding its matrix positions
    into the constant block of the SDP, so the problem has one variable
    per remaining canonical moment; maximize objective . x + constant.
    """
    level = normalize_level(level)
    letters = party_letters(game)
    per_party = max(len(l) for l in letters)
    cap = MAX_LETTERS_LEVEL2 if max_letters is None else max_letters
    if level == "2" and per_party > cap:
        raise NpaSizeError(
            f"level 2 with {per_party} letters per party exceeds {cap}; "
            "build at a lower level or export the problem")
    gens = generating_set(game, level)
    N = len(gens)
    empty = tuple(() for _ in range(game.r))
    index = {empty: 0}
    entries = []
    for i in range(N):
        gi_rev = tuple(tuple(reversed(sw)) for sw in gens[i])
        for j in range(i, N):
            parts = tuple(gi_rev[p] + gens[j][p] for p in range(game.r))
            key = _canon_parts(parts)
            if key is None:
                continue
            var = index.get(key)
            if var is None:
                var = len(index)
                index[key] = var
            entries.append((var, 0, i, j, 1.0))
    m = len(index) - 1
    obj = [0.0] * len(index)
    constant = 0.0
    expand = _expansions(game)
    for (xs, outs), coef in game.coefficients.items():
        coef = float(coef)
        for terms in product(*(expand[(xs[p], outs[p])] for p in range(game.r))):
            sign = 1.0
            parts = []
            for (s, letter) in terms:
                sign *= s
                parts.append(() if letter is None else (letter,))
            key = _canon_parts(tuple(parts))
            val = sign * coef
            if key == empty:
                constant += val
            else:
                var = index.get(key)
                if var is None:
                    # r parties need words of length r in the objective; a
                    # plain level-1 matrix only reaches length 2
                    raise NpaSizeError(
                        f"objective moment {key} is outside the level-{level} "
                        "moment matrix; use level 1+ab or higher")
                obj[var] += val
    rel = MomentRelaxation(
        level=level,
        monomials=tuple(sorted(index, key=index.get)),
        index=index,
        objective=tuple(obj),
        constant=constant,
        block_size=N,
        letters=letters)
    problem = sdp.make_problem(m, (N,), obj[1:], entries)
    return rel, problem


@dataclass(frozen=True)
class NpaBound:
    value: float
    certified: bool
    gap: float
    status: str
    level: str


def bound_from_solution(rel, sol):
    """Upper bound on the game value from a solved relaxation.

    The dual objective certifies the bound; a missing or failed dual falls
    back to the primal value, flagged uncertified.
    """
    if sol.status in ("infeasible", "unbounded"):
        raise ValueError(f"solver reported {sol.status}; no bound available")
    certified = sol.status in ("optimal", "near-optimal") and sol.dual is not None
    raw = sol.dual if certified else sol.primal
    return NpaBound(value=raw + rel.constant, certified=certified,
                    gap=sol.gap, status=sol.status, level=rel.level)


def npa_bound(game, level, tol=1e-8, max_letters=None):
    """Build and solve in-process with the embedded solver."""
    rel, problem = build_relaxation(game, level, max_letters=max_letters)
    sol = sdp.solve_embedded(problem, tol=tol)
    return bound_from_solution(rel, sol)
