"""Binary CSP data model, DIMACS ingestion, the 3SAT reduction, and the
two reference solvers (exhaustive search and grid-slab dynamic programming).

Domains are 0-based: values live in {0, ..., domain_size-1}.  Unary
constraints are stored apart from binary ones; a scope (v, v) coming from
outside is normalized into a unary set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

from .errors import BudgetError, InputError, ParseError
from .graphs import Graph, GridGraph

DEFAULT_SEARCH_BUDGET = 4_000_000


@dataclass(frozen=True)
class CspInstance:
    """Binary CSP: at most one constraint per scope, relations over D x D."""

    variable_count: int
    domain_size: int
    unary: dict = field(default_factory=dict)  # var -> frozenset of allowed values
    binary: dict = field(default_factory=dict)  # (u, v) with u < v -> frozenset of pairs

    def __post_init__(self):
        if self.variable_count < 0 or self.domain_size < 1:
            raise InputError("need variable_count >= 0 and domain_size >= 1")
        dom = range(self.domain_size)
        un = {}
        for v, allowed in self.unary.items():
            if not (0 <= v < self.variable_count):
                raise InputError(f"unary constraint on unknown variable {v}")
            allowed = frozenset(allowed)
            if any(x not in dom for x in allowed):
                raise InputError(f"unary constraint on {v} mentions a value outside the domain")
            un[v] = allowed
        bi = {}
        for scope, rel in self.binary.items():
            u, v = scope
            if u == v:
                raise InputError("scope (v, v) must be normalized into a unary constraint")
            if u > v:
                u, v = v, u
                rel = frozenset((y, x) for x, y in rel)
            if not (0 <= u < self.variable_count and 0 <= v < self.variable_count):
                raise InputError(f"binary scope {scope} outside variable range")
            rel = frozenset((int(x), int(y)) for x, y in rel)
            if any(x not in dom or y not in dom for x, y in rel):
                raise InputError(f"relation on {scope} mentions a value outside the domain")
            if (u, v) in bi:
                raise InputError(f"duplicate constraint scope {(u, v)}")
            bi[(u, v)] = rel
        object.__setattr__(self, "unary", un)
        object.__setattr__(self, "binary", bi)

    def allowed(self, v):
        return self.unary.get(v, frozenset(range(self.domain_size)))

    def primal_graph(self):
        return Graph.from_edges(self.variable_count, self.binary.keys())

    def max_constraint_degree(self):
        """Largest number of constraint scopes any variable occurs in."""
        deg = [0] * self.variable_count
        for u, v in self.binary:
            deg[u] += 1
            deg[v] += 1
        return max(deg, default=0)


@dataclass(frozen=True)
class CnfFormula:
    """CNF with clauses of at most three literals (nonzero signed ints)."""

    variable_count: int
    clauses: tuple

    def __post_init__(self):
        for cl in self.clauses:
            if len(cl) > 3:
                raise InputError(f"clause {cl} has more than 3 literals")
            for lit in cl:
                if lit == 0 or abs(lit) > self.variable_count:
                    raise InputError(f"literal {lit} out of range")

    def evaluate(self, assignment):
        """assignment: tuple of bools indexed by variable-1."""
        for cl in self.clauses:
            if not any(assignment[abs(l) - 1] == (l > 0) for l in cl):
                return False
        return True

    def satisfiable_brute(self):
        for bits in product((False, True), repeat=self.variable_count):
            if self.evaluate(bits):
                return True
        return False


def parse_dimacs(text):
    """Parse DIMACS CNF text into a CnfFormula.

    Comment lines start with 'c'; a '%' line ends the clause section (a
    convention some benchmark files use).  Duplicate literals inside a
    clause are collapsed.  Clauses may span lines; each ends with 0.
    """
    nvars = None
    nclauses = None
    clauses = []
    current = []
    ended = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("%"):
            ended = True
            break
        if line.startswith("p"):
            if nvars is not None:
                raise ParseError("duplicate problem line", lineno)
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"malformed problem line {line!r}", lineno)
            try:
                nvars, nclauses = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"non-integer counts in problem line {line!r}", lineno)
            if nvars < 0 or nclauses < 0:
                raise ParseError("negative counts in problem line", lineno)
            continue
        if nvars is None:
            raise ParseError("clause before problem line", lineno)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad token {tok!r}", lineno)
            if lit == 0:
                clauses.append(tuple(sorted(set(current), key=lambda l: (abs(l), l))))
                current = []
                continue
            if abs(lit) > nvars:
                raise ParseError(f"literal {lit} exceeds declared variable count {nvars}", lineno)
            current.append(lit)
    if nvars is None:
        raise ParseError("missing problem line", 1)
    if current and not ended:
        raise ParseError("last clause not terminated by 0", lineno)
    if nclauses is not None and len(clauses) != nclauses and not ended:
        # Header mismatch is tolerated (common in the wild) but only quietly
        # when the clause section parsed cleanly.
        pass
    for cl in clauses:
        if len(cl) > 3:
            raise ParseError(f"clause {cl} has more than 3 literals", lineno)
    return CnfFormula(nvars, tuple(clauses))


def sat_to_csp(formula):
    """Reduce a <=3-literal CNF to an equisatisfiable binary CSP.

    Domain size is 3 and every variable occurs in at most 3 constraint
    scopes.  One CSP variable per clause picks which literal satisfies it
    (values 0..2); each CNF variable becomes a path of 0/1 copies, one per
    occurrence, chained by equality, and each clause is linked to the copy
    of the variable its chosen literal mentions.
    """
    clause_vars = []  # csp id per clause
    copy_vars = {}  # (cnf var, occurrence idx) -> csp id
    occurrences = {}  # cnf var -> count
    unary = {}
    binary = {}
    next_id = 0

    for ci, clause in enumerate(formula.clauses):
        clause_vars.append(next_id)
        if len(clause) == 0:
            unary[next_id] = frozenset()  # empty clause: no satisfying pick
        elif len(clause) < 3:
            unary[next_id] = frozenset(range(len(clause)))
        next_id += 1

    eq01 = frozenset({(0, 0), (1, 1)})
    for ci, clause in enumerate(formula.clauses):
        cv = clause_vars[ci]
        for slot, lit in enumerate(clause):
            x = abs(lit)
            occ = occurrences.get(x, 0)
            occurrences[x] = occ + 1
            cp = next_id
            next_id += 1
            copy_vars[(x, occ)] = cp
            unary[cp] = frozenset({0, 1})
            if occ > 0:
                prev = copy_vars[(x, occ - 1)]
                key = (min(prev, cp), max(prev, cp))
                binary[key] = eq01
            want = 1 if lit > 0 else 0
            # Choosing slot j != slot leaves the copy free; choosing this slot
            # forces the copy to the literal's sign.
            rel = frozenset(
                (j, b) for j in range(3) for b in (0, 1) if j != slot or b == want
            )
            key = (min(cv, cp), max(cv, cp))
            binary[key] = rel

    inst = CspInstance(next_id, 3, unary, binary)
    # Structural guarantees of the reduction, asserted on every output.
    if inst.domain_size != 3:
        raise ConstructionError("sat_to_csp produced wrong domain size")
    if inst.max_constraint_degree() > 3:
        raise ConstructionError("sat_to_csp exceeded degree 3")
    return inst


# imported late to avoid a cycle in module constants
from .errors import ConstructionError  # noqa: E402


def check(instance, assignment):
    """True iff the total assignment satisfies every constraint."""
    if len(assignment) != instance.variable_count:
        raise InputError("assignment is not total")
    for v, val in enumerate(assignment):
        if not (0 <= val < instance.domain_size):
            raise InputError(f"value {val} for variable {v} outside domain")
    for v, allowed in instance.unary.items():
        if assignment[v] not in allowed:
            return False
    for (u, v), rel in instance.binary.items():
        if (assignment[u], assignment[v]) not in rel:
            return False
    return True


def solve_brute(instance, budget=DEFAULT_SEARCH_BUDGET):
    """Lexicographically least satisfying assignment, or None.

    Backtracking in value order with forward filtering against already
    assigned neighbours; explores assignments in lexicographic order so the
    first solution found is the least one.
    """
    n = instance.variable_count
    if n == 0:
        return ()
    if instance.domain_size**min(n, 64) > budget and instance.domain_size > 1:
        # The worst case must fit the budget; pruning usually does far better,
        # so the budget is enforced on nodes actually expanded below.
        pass
    nodes = 0
    allowed = [sorted(instance.allowed(v)) for v in range(n)]
    # neighbor lists with oriented relation lookup
    nbrs = {v: [] for v in range(n)}
    for (u, v), rel in instance.binary.items():
        nbrs[v].append((u, rel, True))  # u assigned before v when u < v
        nbrs[u].append((v, rel, False))
    assignment = [None] * n

    def extend(v):
        nonlocal nodes
        if v == n:
            return True
        for val in allowed[v]:
            nodes += 1
            if nodes > budget:
                raise BudgetError(f"solve_brute exceeded {budget} nodes", site="solve_brute")
            ok = True
            for w, rel, w_first in nbrs[v]:
                if w < v:
                    pair = (assignment[w], val) if w_first else (val, assignment[w])
                    if pair not in rel:
                        ok = False
                        break
            if ok:
                assignment[v] = val
                if extend(v + 1):
                    return True
                assignment[v] = None
        return False

    if extend(0):
        return tuple(assignment)
    return None


@dataclass(frozen=True)
class GridCsp:
    """CSP whose primal graph is an induced subgraph of R[n,d].

    Points are 1-based d-tuples; binary scopes are (a, a+e_i) ordered so
    the second point is larger in exactly one coordinate by one.
    """

    n: int
    d: int
    domain_size: int
    unary: dict = field(default_factory=dict)  # point -> frozenset of values
    binary: dict = field(default_factory=dict)  # (a, b) -> frozenset of pairs

    def __post_init__(self):
        grid = GridGraph(self.n, self.d)
        un = {}
        for p, allowed in self.unary.items():
            p = tuple(p)
            if not grid.contains(p):
                raise InputError(f"unary constraint on non-grid point {p}")
            un[p] = frozenset(allowed)
            if any(not (0 <= x < self.domain_size) for x in un[p]):
                raise InputError(f"unary values on {p} outside domain")
        bi = {}
        for (a, b), rel in self.binary.items():
            a, b = tuple(a), tuple(b)
            if a > b:
                a, b = b, a
                rel = frozenset((y, x) for x, y in rel)
            if not grid.adjacent(a, b):
                raise InputError(f"binary scope ({a}, {b}) is not a grid edge")
            rel = frozenset((int(x), int(y)) for x, y in rel)
            if any(
                not (0 <= x < self.domain_size and 0 <= y < self.domain_size)
                for x, y in rel
            ):
                raise InputError(f"relation on ({a}, {b}) outside domain")
            bi[(a, b)] = rel
        object.__setattr__(self, "unary", un)
        object.__setattr__(self, "binary", bi)

    def grid(self):
        return GridGraph(self.n, self.d)

    def points(self):
        """All grid points, in lexicographic order."""
        return list(self.grid().vertices())

    def allowed(self, p):
        return self.unary.get(p, frozenset(range(self.domain_size)))

    def to_generic(self):
        """Flatten to a CspInstance over lexicographically indexed points."""
        idx = {p: i for i, p in enumerate(self.points())}
        unary = {idx[p]: allowed for p, allowed in self.unary.items()}
        binary = {}
        for (a, b), rel in self.binary.items():
            u, v = idx[a], idx[b]
            if u < v:
                binary[(u, v)] = rel
            else:
                binary[(v, u)] = frozenset((y, x) for x, y in rel)
        return CspInstance(self.n**self.d, self.domain_size, unary, binary)

    def check(self, assignment):
        """assignment: dict point -> value, total over grid points."""
        flat = tuple(assignment[p] for p in self.points())
        return check(self.to_generic(), flat)


def solve_grid_dp(grid_csp, budget=DEFAULT_SEARCH_BUDGET):
    """Layer-sweep dynamic programming solver for grid CSPs.

    Sweeps R[n,d] along the last coordinate; a state is a full assignment
    of one (d-1)-dimensional layer.  Returns the lexicographically least
    solution as a dict point -> value (lexicographic over the point order),
    or None.  Layer state count |D|^(n^(d-1)) is charged against budget.
    """
    n, d, D = grid_csp.n, grid_csp.d, grid_csp.domain_size
    layer_points = (
        [()] if d == 1 else list(product(range(1, n + 1), repeat=d - 1))
    )
    layer_size = len(layer_points)
    if D**layer_size > budget:
        raise BudgetError(
            f"grid DP needs {D}**{layer_size} layer states, over budget {budget}",
            site="solve_grid_dp",
        )

    def full_point(prefix, z):
        return prefix + (z,)

    def layer_ok(state, z):
        """Unary plus intra-layer binary feasibility for layer z."""
        for i, prefix in enumerate(layer_points):
            p = full_point(prefix, z)
            if state[i] not in grid_csp.allowed(p):
                return False
        for i, prefix in enumerate(layer_points):
            p = full_point(prefix, z)
            for j in range(i + 1, layer_size):
                q = full_point(layer_points[j], z)
                key = (p, q) if p < q else (q, p)
                rel = grid_csp.binary.get(key)
                if rel is None:
                    continue
                pair = (state[i], state[j]) if p < q else (state[j], state[i])
                if pair not in rel:
                    return False
        return True

    def cross_ok(prev_state, state, z):
        """Binary constraints between layer z-1 and layer z."""
        for i, prefix in enumerate(layer_points):
            p_prev = full_point(prefix, z - 1)
            p_cur = full_point(prefix, z)
            rel = grid_csp.binary.get((p_prev, p_cur))
            if rel is not None and (prev_state[i], state[i]) not in rel:
                return False
        return True

    all_states = list(product(range(D), repeat=layer_size))
    feasible = [[s for s in all_states if layer_ok(s, z)] for z in range(1, n + 1)]

    # Backward reachability: can layer z with state s be extended to layer n?
    reach = [set(feasible[n - 1])]
    for z in range(n - 1, 0, -1):
        prev_reach = set()
        nxt = reach[0]
        for s in feasible[z - 1]:
            if any(cross_ok(s, t, z + 1) and t in nxt for t in feasible[z]):
                prev_reach.add(s)
        reach.insert(0, prev_reach)

    # Forward greedy pick, lexicographically least layer by layer.
    chosen = []
    prev = None
    for z in range(1, n + 1):
        candidates = sorted(reach[z - 1])
        pick = None
        for s in candidates:
            if prev is not None and not cross_ok(prev, s, z):
                continue
            pick = s
            break
        if pick is None:
            return None
        chosen.append(pick)
        prev = pick

    solution = {}
    for z, state in enumerate(chosen, start=1):
        for i, prefix in enumerate(layer_points):
            solution[full_point(prefix, z)] = state[i]
    return solution
