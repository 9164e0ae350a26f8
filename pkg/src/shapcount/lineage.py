"""Boolean conjunctive queries over relational data.

Every tuple of an endogenous relation carries a Boolean variable; the
lineage of a query over a database is the positive DNF over those variables
describing exactly which tuple subsets satisfy the query.  Exogenous
relations are fixed context: their tuples gate matches but contribute no
variables.

Variables are assigned in schema-then-row order, so all outputs are
reproducible byte for byte.
"""

from __future__ import annotations

import csv
import io
import re
import warnings
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .boolfunc import (
    BoolFunc,
    Const,
    ENUMERATION_BOUND,
    Node,
    Var,
    brute_shapley_subsets,
    conjunction,
    disjunction,
    dnf_from_clauses,
)
from .circuit import Circuit, CircuitBuilder, shapley_circuit
from .errors import InputError, RefusalError


@dataclass(frozen=True)
class Relation:
    name: str
    arity: int
    endogenous: bool


@dataclass(frozen=True)
class Schema:
    relations: tuple[Relation, ...]

    def __post_init__(self) -> None:
        names = [r.name for r in self.relations]
        if len(set(names)) != len(names):
            raise InputError("relation names must be unique")
        for r in self.relations:
            if r.arity < 1:
                raise InputError(f"relation {r.name} needs arity >= 1")

    def get(self, name: str) -> Relation:
        for r in self.relations:
            if r.name == name:
                return r
        raise InputError(f"unknown relation {name}")


@dataclass(frozen=True)
class QueryVar:
    name: str


@dataclass(frozen=True)
class QueryConst:
    value: str


Term = QueryVar | QueryConst


@dataclass(frozen=True)
class Atom:
    relation: str
    args: tuple[Term, ...]


@dataclass(frozen=True)
class Query:
    atoms: tuple[Atom, ...]

    def variables(self) -> tuple[str, ...]:
        seen: list[str] = []
        for atom in self.atoms:
            for arg in atom.args:
                if isinstance(arg, QueryVar) and arg.name not in seen:
                    seen.append(arg.name)
        return tuple(seen)

    def size(self) -> int:
        return len(self.atoms)


class Database:
    """Relational instance with one Boolean variable per endogenous tuple."""

    __slots__ = ("schema", "rows", "tuple_map", "_var_ids")

    def __init__(self, schema: Schema, rows: Mapping[str, Iterable[Sequence[str]]]):
        self.schema = schema
        stored: dict[str, tuple[tuple[str, ...], ...]] = {}
        for name in rows:
            schema.get(name)
        for rel in schema.relations:
            seen: list[tuple[str, ...]] = []
            for row in rows.get(rel.name, ()):
                t = tuple(str(v) for v in row)
                if len(t) != rel.arity:
                    raise InputError(
                        f"relation {rel.name} has arity {rel.arity}, row {t} does not fit"
                    )
                if t not in seen:
                    seen.append(t)
            stored[rel.name] = tuple(seen)
        self.rows = stored
        tuple_map: list[tuple[str, int]] = []
        var_ids: dict[tuple[str, int], int] = {}
        for rel in schema.relations:
            if rel.endogenous:
                for idx in range(len(stored[rel.name])):
                    var_ids[(rel.name, idx)] = len(tuple_map)
                    tuple_map.append((rel.name, idx))
        self.tuple_map = tuple(tuple_map)
        self._var_ids = var_ids

    @property
    def var_count(self) -> int:
        return len(self.tuple_map)

    def var_of(self, relation: str, row_index: int) -> int:
        try:
            return self._var_ids[(relation, row_index)]
        except KeyError:
            raise InputError(f"no variable for {relation} row {row_index}") from None

    def active_domain(self) -> tuple[str, ...]:
        values: set[str] = set()
        for rows in self.rows.values():
            for row in rows:
                values.update(row)
        return tuple(sorted(values))


# ---------------------------------------------------------------------------
# Text formats

_ATOM = re.compile(r"([A-Za-z_][A-Za-z0-9_]*)\s*\(([^()]*)\)")
_VAR = re.compile(r"[a-z][A-Za-z0-9_]*\Z")


def parse_schema(text: str) -> Schema:
    relations = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3 or fields[2] not in ("endo", "exo"):
            raise InputError(f"schema line {lineno}: expected 'name arity endo|exo'")
        try:
            arity = int(fields[1])
        except ValueError:
            raise InputError(f"schema line {lineno}: bad arity {fields[1]!r}") from None
        relations.append(Relation(fields[0], arity, fields[2] == "endo"))
    if not relations:
        raise InputError("empty schema")
    return Schema(tuple(relations))


def schema_text(schema: Schema) -> str:
    return "".join(
        f"{r.name} {r.arity} {'endo' if r.endogenous else 'exo'}\n"
        for r in schema.relations
    )


def parse_query(text: str) -> Query:
    """One-line queries like `Q :- R(x), S(x,'a'), T(y)`.

    Lowercase-leading identifiers are variables; quoted strings and
    anything else are constants.
    """
    line = text.strip()
    if ":-" in line:
        line = line.split(":-", 1)[1]
    atoms = []
    consumed = 0
    for m in _ATOM.finditer(line):
        args = []
        body = m.group(2).strip()
        if not body:
            raise InputError(f"atom {m.group(1)} has no arguments")
        for piece in body.split(","):
            piece = piece.strip()
            if not piece:
                raise InputError(f"atom {m.group(1)}: empty argument")
            if (piece[0] == piece[-1] == "'") or (piece[0] == piece[-1] == '"'):
                args.append(QueryConst(piece[1:-1]))
            elif _VAR.match(piece):
                args.append(QueryVar(piece))
            else:
                args.append(QueryConst(piece))
        atoms.append(Atom(m.group(1), tuple(args)))
        consumed += len(m.group(0))
    leftovers = _ATOM.sub("", line).replace(",", "").strip()
    if leftovers:
        raise InputError(f"unparsed query text: {leftovers!r}")
    if not atoms:
        raise InputError("a query needs at least one atom")
    return Query(tuple(atoms))


def query_text(query: Query) -> str:
    def term(t: Term) -> str:
        return t.name if isinstance(t, QueryVar) else f"'{t.value}'"

    body = ", ".join(
        f"{a.relation}({', '.join(term(t) for t in a.args)})" for a in query.atoms
    )
    return f"Q :- {body}\n"


def load_database(directory: str | Path) -> Database:
    base = Path(directory)
    schema = parse_schema((base / "schema.txt").read_text())
    rows: dict[str, list[tuple[str, ...]]] = {}
    for rel in schema.relations:
        path = base / f"{rel.name}.csv"
        if path.exists():
            with path.open(newline="") as handle:
                rows[rel.name] = [tuple(row) for row in csv.reader(handle) if row]
        else:
            rows[rel.name] = []
    return Database(schema, rows)


def write_database(db: Database, directory: str | Path) -> None:
    base = Path(directory)
    base.mkdir(parents=True, exist_ok=True)
    (base / "schema.txt").write_text(schema_text(db.schema))
    for rel in db.schema.relations:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in db.rows[rel.name]:
            writer.writerow(row)
        (base / f"{rel.name}.csv").write_text(buf.getvalue())


# ---------------------------------------------------------------------------
# Lineage construction


def _check_query(query: Query, schema: Schema) -> None:
    for atom in query.atoms:
        rel = schema.get(atom.relation)
        if len(atom.args) != rel.arity:
            raise InputError(
                f"atom {atom.relation} has {len(atom.args)} arguments, relation has arity {rel.arity}"
            )


@dataclass(frozen=True, eq=False)
class Lineage:
    """Positive-DNF lineage with the variable-to-tuple correspondence."""

    func: BoolFunc
    clauses: tuple[frozenset[int], ...]
    tuple_map: tuple[tuple[str, int], ...]


def build_lineage(query: Query, db: Database) -> Lineage:
    """Lineage by enumerating all homomorphisms from the query into the
    database.  One clause per homomorphism (exogenous atoms contribute no
    literal); duplicates collapse, and a match using only exogenous atoms
    makes the lineage the constant 1.
    """
    _check_query(query, db.schema)
    clauses: set[frozenset[int]] = set()

    def extend(atom_index: int, binding: dict[str, str], literals: frozenset[int]) -> bool:
        if atom_index == len(query.atoms):
            clauses.add(literals)
            return literals == frozenset()
        atom = query.atoms[atom_index]
        rel = db.schema.get(atom.relation)
        for row_index, row in enumerate(db.rows[atom.relation]):
            new_binding = dict(binding)
            ok = True
            for term, value in zip(atom.args, row):
                if isinstance(term, QueryConst):
                    if term.value != value:
                        ok = False
                        break
                else:
                    bound = new_binding.get(term.name)
                    if bound is None:
                        new_binding[term.name] = value
                    elif bound != value:
                        ok = False
                        break
            if not ok:
                continue
            lits = literals
            if rel.endogenous:
                lits = literals | {db.var_of(atom.relation, row_index)}
            if extend(atom_index + 1, new_binding, lits):
                return True
        return False

    if extend(0, {}, frozenset()):
        clauses = {frozenset()}
    ordered = tuple(sorted(clauses, key=lambda c: tuple(sorted(c))))
    return Lineage(dnf_from_clauses(ordered, db.var_count), ordered, db.tuple_map)


def lineage_by_active_domain(query: Query, db: Database) -> BoolFunc:
    """Reference construction that follows the recursive definition of
    lineage literally: existential variables expand into disjunctions over
    the whole active domain.  Exponential; for cross-checks only."""
    _check_query(query, db.schema)
    adom = db.active_domain()
    variables = query.variables()
    row_index: dict[str, dict[tuple[str, ...], int]] = {
        rel.name: {row: i for i, row in enumerate(db.rows[rel.name])}
        for rel in db.schema.relations
    }

    def ground_atom(atom: Atom, binding: dict[str, str]) -> Node:
        values = tuple(
            t.value if isinstance(t, QueryConst) else binding[t.name] for t in atom.args
        )
        rel = db.schema.get(atom.relation)
        idx = row_index[atom.relation].get(values)
        if idx is None:
            return Const(0)
        if rel.endogenous:
            return Var(db.var_of(atom.relation, idx))
        return Const(1)

    def rec(binding: dict[str, str], remaining: tuple[str, ...]) -> Node:
        if not remaining:
            return conjunction([ground_atom(a, binding) for a in query.atoms])
        v, rest = remaining[0], remaining[1:]
        return disjunction([rec({**binding, v: a}, rest) for a in adom])

    return BoolFunc(rec({}, variables), db.var_count)


# ---------------------------------------------------------------------------
# Query classification


def is_hierarchical(query: Query) -> tuple[bool, tuple[str, str] | None]:
    """True when every pair of variables has nested or disjoint atom sets;
    otherwise returns a witnessing pair."""
    variables = query.variables()
    at: dict[str, set[int]] = {v: set() for v in variables}
    for idx, atom in enumerate(query.atoms):
        for arg in atom.args:
            if isinstance(arg, QueryVar):
                at[arg.name].add(idx)
    for i, x in enumerate(variables):
        for y in variables[i + 1 :]:
            a, b = at[x], at[y]
            if a & b and not a <= b and not b <= a:
                return (False, (x, y))
    return (True, None)


def is_self_join_free(query: Query) -> bool:
    names = [a.relation for a in query.atoms]
    return len(set(names)) == len(names)


# ---------------------------------------------------------------------------
# Stretching


def _fresh_var_names(count: int, taken: Iterable[str]) -> list[str]:
    used = set(taken)
    names = []
    for j in range(1, count + 1):
        candidate = f"z{j}"
        while candidate in used:
            candidate = "z" + candidate
        used.add(candidate)
        names.append(candidate)
    return names


def stretch_query(query: Query, schema: Schema) -> Query:
    """Give every endogenous atom one fresh leading variable."""
    endo_atoms = sum(1 for a in query.atoms if schema.get(a.relation).endogenous)
    fresh = _fresh_var_names(endo_atoms, query.variables())
    out = []
    next_fresh = 0
    for atom in query.atoms:
        if schema.get(atom.relation).endogenous:
            out.append(Atom(atom.relation, (QueryVar(fresh[next_fresh]),) + atom.args))
            next_fresh += 1
        else:
            out.append(atom)
    return Query(tuple(out))


def _stretched_schema(schema: Schema) -> Schema:
    return Schema(
        tuple(
            Relation(r.name, r.arity + 1, True) if r.endogenous else r
            for r in schema.relations
        )
    )


@dataclass(frozen=True, eq=False)
class StretchedDatabase:
    """Database with one fresh leading attribute on each endogenous relation.

    var_map sends each new variable to the variable of the tuple it came
    from; fresh_values records the leading constant given to each new tuple.
    """

    database: Database
    var_map: dict[int, int]
    fresh_values: dict[int, str]


DUMMY_VALUE = "d"


def stretch_database_dummy(db: Database) -> StretchedDatabase:
    """Stretch with a single shared dummy value, preserving the lineage of
    any stretched query exactly (variable ids included)."""
    rows = {
        rel.name: [
            ((DUMMY_VALUE,) + row) if rel.endogenous else row
            for row in db.rows[rel.name]
        ]
        for rel in db.schema.relations
    }
    stretched = Database(_stretched_schema(db.schema), rows)
    var_map = {i: i for i in range(db.var_count)}
    fresh = {i: DUMMY_VALUE for i in range(db.var_count)}
    return StretchedDatabase(stretched, var_map, fresh)


def stretch_database_expand(db: Database, arities: Sequence[int]) -> StretchedDatabase:
    """Stretch and replicate: the tuple carrying variable v becomes
    arities[v] tuples with fresh namespaced leading values (0 deletes it).
    The lineage of a stretched query over the result is the original
    lineage with variable v replaced by the disjunction of its copies.
    """
    if len(arities) != db.var_count:
        raise InputError(
            f"need one arity per endogenous tuple: got {len(arities)} for {db.var_count}"
        )
    if any(m < 0 for m in arities):
        raise InputError("arities must be nonnegative")
    rows: dict[str, list[tuple[str, ...]]] = {}
    origins: list[int] = []
    fresh_values: list[str] = []
    for rel in db.schema.relations:
        if not rel.endogenous:
            rows[rel.name] = list(db.rows[rel.name])
            continue
        counter = 0
        expanded = []
        for row_index, row in enumerate(db.rows[rel.name]):
            source = db.var_of(rel.name, row_index)
            for _ in range(arities[source]):
                counter += 1
                value = f"z!{rel.name}!{counter}"
                expanded.append((value,) + row)
                origins.append(source)
                fresh_values.append(value)
        rows[rel.name] = expanded
    stretched = Database(_stretched_schema(db.schema), rows)
    var_map = {new: src for new, src in enumerate(origins)}
    fresh = {new: val for new, val in enumerate(fresh_values)}
    return StretchedDatabase(stretched, var_map, fresh)


# ---------------------------------------------------------------------------
# Hierarchical compilation


def compile_hierarchical_lineage(query: Query, db: Database) -> Circuit:
    """Compile the lineage of a hierarchical self-join-free query into a
    deterministic and decomposable circuit, in time polynomial in the data.

    Independent subqueries multiply out over an AND; the disjunction over
    the values of a root variable (one occurring in every atom of a
    connected subquery) is made exclusive by the first-true-branch chain

        D(a_i..) = branch(a_i) or (not branch(a_i) and D(a_(i+1)..))

    Complements are built alongside each subcircuit, so negation only ever
    touches variable gates and the result stays in leaf-negation form.
    """
    _check_query(query, db.schema)
    if not is_self_join_free(query):
        raise RefusalError("self-joins are outside the compiled fragment; use brute force")
    hierarchical, witness = is_hierarchical(query)
    if not hierarchical:
        raise RefusalError(
            f"query is not hierarchical (witness variables {witness[0]}, {witness[1]}); "
            "use brute force on the lineage"
        )
    builder = CircuitBuilder(db.var_count)
    Pair = tuple[int, int]  # (gate, complement gate)

    def negate_chain(pairs: list[Pair]) -> int:
        # complement of a conjunction as an exclusive chain:
        # not(A B ...) = notA or (A and not(B ...))
        acc = pairs[-1][1]
        for pos, neg in reversed(pairs[:-1]):
            acc = builder.or_([neg, builder.and_([pos, acc])])
        return acc

    def conjoin(pairs: list[Pair]) -> Pair:
        if not pairs:
            return (builder.const(1), builder.const(0))
        if len(pairs) == 1:
            return pairs[0]
        return (builder.and_([p for p, _ in pairs]), negate_chain(pairs))

    def chain(branches: list[Pair]) -> Pair:
        if not branches:
            return (builder.const(0), builder.const(1))
        pos, neg = branches[-1]
        for bpos, bneg in reversed(branches[:-1]):
            pos = builder.or_([bpos, builder.and_([bneg, pos])])
            neg = builder.and_([bneg, neg])
        return (pos, neg)

    # an atom in flight: (relation, current args, surviving row indices)
    State = tuple[Relation, tuple[Term, ...], tuple[int, ...]]

    def restrict(state: State) -> State:
        rel, args, candidates = state
        kept = []
        for row_index in candidates:
            row = db.rows[rel.name][row_index]
            positions: dict[str, str] = {}
            ok = True
            for term, value in zip(args, row):
                if isinstance(term, QueryConst):
                    if term.value != value:
                        ok = False
                        break
                else:
                    seen = positions.get(term.name)
                    if seen is None:
                        positions[term.name] = value
                    elif seen != value:
                        ok = False
                        break
            if ok:
                kept.append(row_index)
        return (rel, args, tuple(kept))

    def unbound_vars(state: State) -> set[str]:
        return {t.name for t in state[1] if isinstance(t, QueryVar)}

    def bind(state: State, name: str, value: str) -> State:
        rel, args, candidates = state
        new_args = tuple(
            QueryConst(value) if isinstance(t, QueryVar) and t.name == name else t
            for t in args
        )
        return restrict((rel, new_args, candidates))

    def compile_states(states: list[State]) -> Pair:
        parts: list[Pair] = []
        pending: list[State] = []
        for state in states:
            rel, args, candidates = state
            if unbound_vars(state):
                pending.append(state)
                continue
            if not candidates:
                return (builder.const(0), builder.const(1))
            if rel.endogenous:
                # deduplicated rows make the fully ground match unique
                v = db.var_of(rel.name, candidates[0])
                parts.append((builder.var(v), builder.negate(builder.var(v))))
        # split what is left into connected components over shared variables
        remaining = list(pending)
        while remaining:
            component = [remaining.pop(0)]
            grabbed = True
            while grabbed:
                grabbed = False
                covered = set().union(*(unbound_vars(s) for s in component))
                for other in list(remaining):
                    if unbound_vars(other) & covered:
                        component.append(other)
                        remaining.remove(other)
                        grabbed = True
            parts.append(compile_component(component))
        return conjoin(parts)

    def compile_component(states: list[State]) -> Pair:
        occurrences: dict[str, int] = {}
        for state in states:
            for name in unbound_vars(state):
                occurrences[name] = occurrences.get(name, 0) + 1
        root = None
        for name in sorted(occurrences):
            if occurrences[name] == len(states):
                root = name
                break
        if root is None:
            raise RefusalError("no root variable: the query is not hierarchical")
        values: set[str] | None = None
        for rel, args, candidates in states:
            position = next(
                i for i, t in enumerate(args) if isinstance(t, QueryVar) and t.name == root
            )
            here = {db.rows[rel.name][r][position] for r in candidates}
            values = here if values is None else values & here
        branches = []
        for value in sorted(values or ()):
            bound = [bind(s, root, value) for s in states]
            if any(not s[2] for s in bound):
                continue
            pair = compile_states(bound)
            if builder.const_value(pair[0]) == 0:
                continue
            branches.append(pair)
        return chain(branches)

    initial = [
        restrict((db.schema.get(a.relation), a.args, tuple(range(len(db.rows[a.relation])))))
        for a in query.atoms
    ]
    if any(not s[2] for s in initial):
        root_pair = (builder.const(0), builder.const(1))
    else:
        root_pair = compile_states(initial)
    return builder.build(root_pair[0], deterministic_by_construction=True)


# ---------------------------------------------------------------------------
# The dichotomy pipeline


def shapley_tuples(
    query: Query, db: Database, *, bound: int = ENUMERATION_BOUND
) -> tuple[Fraction, ...]:
    """Shapley value of every endogenous tuple, indexed like db.tuple_map.

    Hierarchical queries go through the compiled circuit and stay exact at
    any size; non-hierarchical ones fall back to exhaustive enumeration of
    the lineage (with a warning), refusing above the bound.
    """
    if not is_self_join_free(query):
        raise InputError("the dichotomy pipeline handles self-join-free queries only")
    hierarchical, _ = is_hierarchical(query)
    if hierarchical:
        return shapley_circuit(compile_hierarchical_lineage(query, db))
    lineage = build_lineage(query, db)
    if db.var_count > bound:
        raise RefusalError(
            f"non-hierarchical query: exact Shapley computation is intractable in "
            f"general, and {db.var_count} tuple variables exceed the exhaustive "
            f"bound of {bound}"
        )
    warnings.warn(
        "non-hierarchical query: falling back to exhaustive enumeration of the lineage",
        stacklevel=2,
    )
    return brute_shapley_subsets(lineage.func, bound=bound)


# ---------------------------------------------------------------------------
# Hardness constructions


def pp2dnf_instance(edges: Iterable[tuple[int, int]]) -> tuple[Database, Query]:
    """Relational instance whose lineage is the positive bipartite DNF
    with one clause X_i and Y_j per edge (i, j)."""
    edge_list = sorted({(int(i), int(j)) for i, j in edges})
    if not edge_list:
        raise InputError("need at least one edge")
    xs = sorted({i for i, _ in edge_list})
    ys = sorted({j for _, j in edge_list})
    schema = Schema(
        (
            Relation("R", 1, True),
            Relation("S", 2, False),
            Relation("T", 1, True),
        )
    )
    db = Database(
        schema,
        {
            "R": [(str(i),) for i in xs],
            "S": [(str(i), str(j)) for i, j in edge_list],
            "T": [(str(j),) for j in ys],
        },
    )
    query = Query(
        (
            Atom("R", (QueryVar("x"),)),
            Atom("S", (QueryVar("x"), QueryVar("y"))),
            Atom("T", (QueryVar("y"),)),
        )
    )
    return db, query


@dataclass(frozen=True, eq=False)
class EmbeddedInstance:
    database: Database
    var_map: dict[int, int]  # variable in the source database -> variable here


def embed_nonhierarchical(query: Query, db: Database) -> EmbeddedInstance:
    """Embed a two-endogenous-relation chain instance into any
    non-hierarchical self-join-free query, preserving the lineage.

    The database must have the chain shape: unary endogenous, binary
    exogenous, unary endogenous.  Two atoms witnessing non-hierarchy (one
    with x only, one with y only) become endogenous and carry the unary
    columns; every other relation is exogenous, holds the constant 1 in the
    positions of other variables, and copies the x/y columns so it filters
    nothing.
    """
    if not is_self_join_free(query):
        raise InputError("the embedding needs a self-join-free query")
    hierarchical, witness = is_hierarchical(query)
    if hierarchical:
        raise RefusalError("the query is hierarchical; there is nothing to embed")
    x, y = witness
    rels = db.schema.relations
    if (
        len(rels) != 3
        or rels[0].arity != 1
        or not rels[0].endogenous
        or rels[1].arity != 2
        or rels[1].endogenous
        or rels[2].arity != 1
        or not rels[2].endogenous
    ):
        raise InputError("the source database must be unary-endo, binary-exo, unary-endo")
    r_rows = db.rows[rels[0].name]
    s_rows = db.rows[rels[1].name]
    t_rows = db.rows[rels[2].name]

    def vars_of(atom: Atom) -> set[str]:
        return {t.name for t in atom.args if isinstance(t, QueryVar)}

    r_atom = next(a for a in query.atoms if x in vars_of(a) and y not in vars_of(a))
    t_atom = next(a for a in query.atoms if y in vars_of(a) and x not in vars_of(a))

    def fill(atom: Atom, assignment: Mapping[str, str]) -> tuple[str, ...]:
        out = []
        for term in atom.args:
            if isinstance(term, QueryConst):
                out.append(term.value)
            else:
                out.append(assignment.get(term.name, "1"))
        return tuple(out)

    relations = []
    rows: dict[str, list[tuple[str, ...]]] = {}
    for atom in query.atoms:
        endogenous = atom is r_atom or atom is t_atom
        relations.append(Relation(atom.relation, len(atom.args), endogenous))
        has_x, has_y = x in vars_of(atom), y in vars_of(atom)
        if atom is r_atom:
            rows[atom.relation] = [fill(atom, {x: a}) for (a,) in r_rows]
        elif atom is t_atom:
            rows[atom.relation] = [fill(atom, {y: b}) for (b,) in t_rows]
        elif has_x and has_y:
            rows[atom.relation] = [fill(atom, {x: a, y: b}) for a, b in s_rows]
        elif has_x:
            rows[atom.relation] = [fill(atom, {x: a}) for (a,) in r_rows]
        elif has_y:
            rows[atom.relation] = [fill(atom, {y: b}) for (b,) in t_rows]
        else:
            rows[atom.relation] = [fill(atom, {})]
    embedded = Database(Schema(tuple(relations)), rows)
    var_map: dict[int, int] = {}
    for row_index in range(len(r_rows)):
        var_map[db.var_of(rels[0].name, row_index)] = embedded.var_of(
            r_atom.relation, row_index
        )
    for row_index in range(len(t_rows)):
        var_map[db.var_of(rels[2].name, row_index)] = embedded.var_of(
            t_atom.relation, row_index
        )
    return EmbeddedInstance(embedded, var_map)
