"""Deterministic and decomposable circuits.

A circuit is an indexed DAG of gates (constants, variables, NOT, n-ary
AND/OR) with a single output gate.  Counting is linear once two properties
hold: every AND combines subcircuits over disjoint variables, and no
valuation satisfies two children of the same OR.  Decomposability is checked
structurally; determinism is verified exhaustively up to a bound, taken on
faith ("assumed") above it, or certified by construction for circuits built
by this package.

Variables absent from a gate's scope are handled by scaling with powers of 2
(or of 1+t for the size-bucketed variant) instead of materializing smoothing
gates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from . import reductions
from .boolfunc import BoolFunc, Const, Node, Not as FNot, And as FAnd, Or as FOr, Var as FVar
from .errors import InputError, RefusalError

CONST0 = "const0"
CONST1 = "const1"
VAR = "var"
NOT = "not"
AND = "and"
OR = "or"

DETERMINISM_BOUND = 20


@dataclass(frozen=True)
class Gate:
    kind: str
    var: int = -1
    inputs: tuple[int, ...] = ()


class Circuit:
    """Immutable-by-convention gate DAG with one output.

    Gate inputs always point at smaller indices, so index order is a
    topological order.  Exactly one gate (the output) feeds nothing.
    """

    __slots__ = ("gates", "output", "var_count", "deterministic_by_construction", "_scopes")

    def __init__(
        self,
        gates: Sequence[Gate],
        output: int,
        var_count: int,
        deterministic_by_construction: bool = False,
    ):
        self.gates = tuple(gates)
        self.output = output
        self.var_count = var_count
        self.deterministic_by_construction = deterministic_by_construction
        self._scopes: tuple[frozenset[int], ...] | None = None
        self._validate()

    def _validate(self) -> None:
        if not self.gates:
            raise InputError("a circuit needs at least one gate")
        if self.var_count < 0:
            raise InputError("variable count must be nonnegative")
        if not 0 <= self.output < len(self.gates):
            raise InputError("output gate index out of range")
        referenced: set[int] = set()
        for idx, gate in enumerate(self.gates):
            if gate.kind in (CONST0, CONST1):
                arity_ok = len(gate.inputs) == 0
            elif gate.kind == VAR:
                arity_ok = len(gate.inputs) == 0
                if not 0 <= gate.var < self.var_count:
                    raise InputError(f"gate {idx}: variable {gate.var} out of range")
            elif gate.kind == NOT:
                arity_ok = len(gate.inputs) == 1
            elif gate.kind in (AND, OR):
                arity_ok = len(gate.inputs) >= 2
            else:
                raise InputError(f"gate {idx}: unknown kind {gate.kind!r}")
            if not arity_ok:
                raise InputError(f"gate {idx}: wrong arity for {gate.kind}")
            for ref in gate.inputs:
                if not 0 <= ref < idx:
                    raise InputError(f"gate {idx}: input {ref} does not precede it")
                referenced.add(ref)
        sinks = set(range(len(self.gates))) - referenced
        if sinks != {self.output}:
            raise InputError(
                f"expected the output to be the only unreferenced gate, found {sorted(sinks)}"
            )

    def size(self) -> int:
        return len(self.gates)

    def scopes(self) -> tuple[frozenset[int], ...]:
        """Per-gate sets of variables reachable below the gate."""
        if self._scopes is None:
            out: list[frozenset[int]] = []
            for gate in self.gates:
                if gate.kind == VAR:
                    out.append(frozenset((gate.var,)))
                elif gate.inputs:
                    scope = out[gate.inputs[0]]
                    for ref in gate.inputs[1:]:
                        scope |= out[ref]
                    out.append(scope)
                else:
                    out.append(frozenset())
            self._scopes = tuple(out)
        return self._scopes

    def certified(self) -> "Circuit":
        """Copy flagged deterministic-by-construction (caller must know)."""
        copy = Circuit.__new__(Circuit)
        copy.gates = self.gates
        copy.output = self.output
        copy.var_count = self.var_count
        copy.deterministic_by_construction = True
        copy._scopes = self._scopes
        return copy


class CircuitBuilder:
    """Bottom-up gate assembly; references must point at existing gates."""

    def __init__(self, var_count: int):
        self.var_count = var_count
        self._gates: list[Gate] = []
        self._consts: dict[int, int] = {}
        self._vars: dict[int, int] = {}
        self._nots: dict[int, int] = {}

    def add(self, kind: str, var: int = -1, inputs: Iterable[int] = ()) -> int:
        refs = tuple(inputs)
        for ref in refs:
            if not 0 <= ref < len(self._gates):
                raise InputError(f"reference to missing gate {ref}")
        self._gates.append(Gate(kind, var, refs))
        return len(self._gates) - 1

    # deduplicating, constant-folding convenience layer

    def const(self, value: int) -> int:
        if value not in self._consts:
            self._consts[value] = self.add(CONST1 if value else CONST0)
        return self._consts[value]

    def var(self, index: int) -> int:
        if index not in self._vars:
            self._vars[index] = self.add(VAR, var=index)
        return self._vars[index]

    def const_value(self, idx: int) -> int | None:
        kind = self._gates[idx].kind
        if kind == CONST0:
            return 0
        if kind == CONST1:
            return 1
        return None

    def negate(self, idx: int) -> int:
        val = self.const_value(idx)
        if val is not None:
            return self.const(1 - val)
        if idx not in self._nots:
            self._nots[idx] = self.add(NOT, inputs=(idx,))
        return self._nots[idx]

    def and_(self, inputs: Sequence[int]) -> int:
        kept = []
        for ref in inputs:
            val = self.const_value(ref)
            if val == 0:
                return self.const(0)
            if val is None:
                kept.append(ref)
        if not kept:
            return self.const(1)
        if len(kept) == 1:
            return kept[0]
        return self.add(AND, inputs=kept)

    def or_(self, inputs: Sequence[int]) -> int:
        kept = []
        for ref in inputs:
            val = self.const_value(ref)
            if val == 1:
                return self.const(1)
            if val is None:
                kept.append(ref)
        if not kept:
            return self.const(0)
        if len(kept) == 1:
            return kept[0]
        return self.add(OR, inputs=kept)

    def build(
        self,
        output: int,
        *,
        deterministic_by_construction: bool = False,
        prune: bool = True,
    ) -> Circuit:
        gates = self._gates
        if prune:
            keep = set()
            stack = [output]
            while stack:
                idx = stack.pop()
                if idx in keep:
                    continue
                keep.add(idx)
                stack.extend(gates[idx].inputs)
            order = sorted(keep)
            remap = {old: new for new, old in enumerate(order)}
            gates = [
                Gate(g.kind, g.var, tuple(remap[r] for r in g.inputs))
                for g in (self._gates[i] for i in order)
            ]
            output = remap[output]
        return Circuit(gates, output, self.var_count, deterministic_by_construction)


# ---------------------------------------------------------------------------
# Parsing and rendering


def parse_nnf(text: str) -> Circuit:
    """Parse the c2d-style format: header `nnf V E n`, then one gate per
    line (`L lit`, `A c i...`, `O j c i...`, `T`, `F`), children referenced
    by 0-based line index, last line being the output.

    Negative literals become NOT gates over variable gates that are
    synthesized on first use, so the internal gate count can exceed V.
    Unary and empty ANDs/ORs are rejected; constants must use T/F.
    """
    header: tuple[int, int, int] | None = None
    gates: list[Gate] = []
    line_gate: list[int] = []
    referenced_lines: set[int] = set()
    var_gate: dict[int, int] = {}
    edge_total = 0

    def fail(lineno: int, message: str):
        raise InputError(f"line {lineno}: {message}")

    def ints(lineno: int, fields: list[str]) -> list[int]:
        try:
            return [int(f) for f in fields]
        except ValueError:
            fail(lineno, f"expected integers, got {fields!r}")

    def child_refs(lineno: int, refs: list[int]) -> tuple[int, ...]:
        out = []
        for ref in refs:
            if not 0 <= ref < len(line_gate):
                fail(lineno, f"reference to undefined gate {ref} (cyclic or forward)")
            referenced_lines.add(ref)
            out.append(line_gate[ref])
        return tuple(out)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        fields = line.split()
        if header is None:
            if fields[0] != "nnf" or len(fields) != 4:
                fail(lineno, "expected header 'nnf V E n'")
            v, e, n = ints(lineno, fields[1:])
            if min(v, e, n) < 0:
                fail(lineno, "header counts must be nonnegative")
            header = (v, e, n)
            continue
        tag = fields[0]
        if tag == "L":
            if len(fields) != 2:
                fail(lineno, "literal lines are 'L lit'")
            (lit,) = ints(lineno, fields[1:])
            if lit == 0 or abs(lit) > header[2]:
                fail(lineno, f"literal {lit} out of range")
            index = abs(lit) - 1
            if lit > 0:
                gates.append(Gate(VAR, var=index))
                line_gate.append(len(gates) - 1)
                var_gate.setdefault(index, len(gates) - 1)
            else:
                if index not in var_gate:
                    gates.append(Gate(VAR, var=index))
                    var_gate[index] = len(gates) - 1
                gates.append(Gate(NOT, inputs=(var_gate[index],)))
                line_gate.append(len(gates) - 1)
        elif tag in ("A", "O"):
            body = ints(lineno, fields[1:])
            if tag == "O":
                if len(body) < 2:
                    fail(lineno, "disjunction lines are 'O j c i...'")
                if body[0] < 0:
                    fail(lineno, "the decision hint must be nonnegative")
                body = body[1:]  # the hint is ignored semantically
            if not body:
                fail(lineno, "conjunction lines are 'A c i...'")
            count, refs = body[0], body[1:]
            if count < 2:
                fail(lineno, "gates need at least two children; use T/F for constants")
            if len(refs) != count:
                fail(lineno, f"declared {count} children, found {len(refs)}")
            kind = AND if tag == "A" else OR
            gates.append(Gate(kind, inputs=child_refs(lineno, refs)))
            line_gate.append(len(gates) - 1)
            edge_total += count
        elif tag in ("T", "F"):
            if len(fields) != 1:
                fail(lineno, "constant lines carry no arguments")
            gates.append(Gate(CONST1 if tag == "T" else CONST0))
            line_gate.append(len(gates) - 1)
        else:
            fail(lineno, f"unknown gate tag {tag!r}")

    if header is None:
        raise InputError("missing 'nnf V E n' header")
    v, e, n = header
    if len(line_gate) != v:
        raise InputError(f"header declares {v} gates, found {len(line_gate)}")
    if edge_total != e:
        raise InputError(f"header declares {e} edges, found {edge_total}")
    if not line_gate:
        raise InputError("a circuit needs at least one gate")
    unreferenced = set(range(len(line_gate))) - referenced_lines
    if unreferenced != {len(line_gate) - 1}:
        raise InputError(
            "every gate but the last must feed another gate; "
            f"unreferenced lines: {sorted(unreferenced)}"
        )
    return Circuit(gates, line_gate[-1], n)


def to_nnf_text(circuit: Circuit) -> str:
    """Render back to the file format.  Variable gates consumed only by NOT
    gates fold into negative literals; NOT above anything else has no file
    representation and is rejected."""
    gates = circuit.gates
    parents: list[list[int]] = [[] for _ in gates]
    for idx, gate in enumerate(gates):
        for ref in gate.inputs:
            parents[ref].append(idx)

    def skip(idx: int) -> bool:
        gate = gates[idx]
        return (
            gate.kind == VAR
            and idx != circuit.output
            and parents[idx]
            and all(gates[p].kind == NOT for p in parents[idx])
        )

    lines: list[str] = []
    line_of: dict[int, int] = {}
    edge_total = 0
    for idx, gate in enumerate(gates):
        if skip(idx):
            continue
        if gate.kind == VAR:
            lines.append(f"L {gate.var + 1}")
        elif gate.kind == NOT:
            child = gates[gate.inputs[0]]
            if child.kind != VAR:
                raise InputError("only negated variables are representable in this format")
            lines.append(f"L -{child.var + 1}")
        elif gate.kind == CONST1:
            lines.append("T")
        elif gate.kind == CONST0:
            lines.append("F")
        else:
            refs = [line_of[r] for r in gate.inputs]
            edge_total += len(refs)
            body = f"{len(refs)} " + " ".join(str(r) for r in refs)
            lines.append(f"A {body}" if gate.kind == AND else f"O 0 {body}")
        line_of[idx] = len(lines) - 1
    header = f"nnf {len(lines)} {edge_total} {circuit.var_count}"
    return "\n".join([header] + lines) + "\n"


def is_leaf_nnf(circuit: Circuit) -> bool:
    """True when every NOT gate sits directly above a variable gate."""
    return all(
        circuit.gates[g.inputs[0]].kind == VAR
        for g in circuit.gates
        if g.kind == NOT
    )


# ---------------------------------------------------------------------------
# Evaluation and validation


def evaluate(circuit: Circuit, true_vars: Iterable[int]) -> int:
    trues = frozenset(true_vars)
    for v in trues:
        if not 0 <= v < circuit.var_count:
            raise InputError(f"valuation mentions variable {v}")
    vals: list[int] = []
    for gate in circuit.gates:
        if gate.kind == CONST0:
            vals.append(0)
        elif gate.kind == CONST1:
            vals.append(1)
        elif gate.kind == VAR:
            vals.append(1 if gate.var in trues else 0)
        elif gate.kind == NOT:
            vals.append(1 - vals[gate.inputs[0]])
        elif gate.kind == AND:
            vals.append(int(all(vals[r] for r in gate.inputs)))
        else:
            vals.append(int(any(vals[r] for r in gate.inputs)))
    return vals[circuit.output]


def gate_tables(circuit: Circuit) -> list[int]:
    """Truth table bitmask of every gate over the full variable space."""
    from .boolfunc import _variable_masks

    n = circuit.var_count
    full = (1 << (1 << n)) - 1
    masks = _variable_masks(n)
    tables: list[int] = []
    for gate in circuit.gates:
        if gate.kind == CONST0:
            tables.append(0)
        elif gate.kind == CONST1:
            tables.append(full)
        elif gate.kind == VAR:
            tables.append(masks[gate.var])
        elif gate.kind == NOT:
            tables.append(full ^ tables[gate.inputs[0]])
        elif gate.kind == AND:
            acc = full
            for r in gate.inputs:
                acc &= tables[r]
            tables.append(acc)
        else:
            acc = 0
            for r in gate.inputs:
                acc |= tables[r]
            tables.append(acc)
    return tables


def check_decomposable(circuit: Circuit) -> tuple[bool, tuple[int, ...]]:
    """Structural check: each AND's children must have pairwise disjoint
    scopes.  Returns the offending gate indices."""
    scopes = circuit.scopes()
    bad = []
    for idx, gate in enumerate(circuit.gates):
        if gate.kind != AND:
            continue
        union = scopes[idx]
        if sum(len(scopes[r]) for r in gate.inputs) != len(union):
            bad.append(idx)
    return (not bad, tuple(bad))


def check_deterministic_exhaustive(
    circuit: Circuit, *, bound: int = DETERMINISM_BOUND
) -> tuple[str, tuple[int, ...] | None]:
    """Exhaustively verify that no valuation satisfies two children of any
    OR gate.  Returns ("verified", None), ("refuted", witness) with the
    witness as a sorted tuple of true variables, or ("assumed", None) when
    the variable count exceeds the bound."""
    if circuit.var_count > bound:
        return ("assumed", None)
    tables = gate_tables(circuit)
    for gate in circuit.gates:
        if gate.kind != OR:
            continue
        seen = 0
        conflict = 0
        for r in gate.inputs:
            conflict |= seen & tables[r]
            seen |= tables[r]
        if conflict:
            index = (conflict & -conflict).bit_length() - 1
            witness = tuple(v for v in range(circuit.var_count) if (index >> v) & 1)
            return ("refuted", witness)
    return ("verified", None)


@dataclass(frozen=True)
class ValidationReport:
    decomposable: bool
    violating_and_gates: tuple[int, ...]
    determinism: str  # "verified" | "assumed" | "refuted"
    witness: tuple[int, ...] | None
    notes: tuple[str, ...] = ()


def validate(circuit: Circuit, *, determinism_bound: int = DETERMINISM_BOUND) -> ValidationReport:
    ok, bad = check_decomposable(circuit)
    notes: list[str] = []
    if circuit.deterministic_by_construction:
        status, witness = "verified", None
        notes.append("determinism certified by construction")
    else:
        status, witness = check_deterministic_exhaustive(circuit, bound=determinism_bound)
        if status == "assumed":
            notes.append(
                f"determinism assumed: {circuit.var_count} variables exceed the "
                f"exhaustive bound of {determinism_bound}"
            )
    return ValidationReport(ok, bad, status, witness, tuple(notes))


def _countable(circuit: Circuit, validation: ValidationReport | None, bound: int) -> ValidationReport:
    report = validation if validation is not None else validate(circuit, determinism_bound=bound)
    if not report.decomposable:
        raise RefusalError(
            f"circuit is not decomposable (AND gates {list(report.violating_and_gates)}); refusing to count"
        )
    if report.determinism == "refuted":
        raise RefusalError(
            f"circuit is not deterministic (two OR children true on {report.witness}); refusing to count"
        )
    return report


# ---------------------------------------------------------------------------
# Counting


def model_count_dd(
    circuit: Circuit,
    *,
    validation: ValidationReport | None = None,
    determinism_bound: int = DETERMINISM_BOUND,
) -> int:
    """Exact model count in one bottom-up pass.

    Each gate's count is taken over its own scope; OR children are scaled by
    2^(scope gap) and the output by 2^(unused declared variables).
    """
    _countable(circuit, validation, determinism_bound)
    scopes = circuit.scopes()
    counts: list[int] = []
    for idx, gate in enumerate(circuit.gates):
        if gate.kind == CONST0:
            counts.append(0)
        elif gate.kind in (CONST1, VAR):
            counts.append(1)
        elif gate.kind == NOT:
            child = gate.inputs[0]
            counts.append((1 << len(scopes[child])) - counts[child])
        elif gate.kind == AND:
            acc = 1
            for r in gate.inputs:
                acc *= counts[r]
            counts.append(acc)
        else:
            width = len(scopes[idx])
            acc = 0
            for r in gate.inputs:
                acc += counts[r] << (width - len(scopes[r]))
            counts.append(acc)
    out = counts[circuit.output]
    return out << (circuit.var_count - len(scopes[circuit.output]))


def _shift_poly(poly: list[int], gap: int) -> list[int]:
    # multiply by (1+t)^gap
    if gap == 0:
        return poly
    binoms = [comb(gap, j) for j in range(gap + 1)]
    out = [0] * (len(poly) + gap)
    for i, c in enumerate(poly):
        if c:
            for j, b in enumerate(binoms):
                out[i + j] += c * b
    return out


def size_polynomial_count(
    circuit: Circuit,
    *,
    validation: ValidationReport | None = None,
    determinism_bound: int = DETERMINISM_BOUND,
) -> tuple[int, ...]:
    """Size-bucketed model counts via one bottom-up pass of generating
    polynomials: a gate's polynomial has the number of its size-k models
    over its scope as the t^k coefficient."""
    _countable(circuit, validation, determinism_bound)
    scopes = circuit.scopes()
    polys: list[list[int]] = []
    for idx, gate in enumerate(circuit.gates):
        if gate.kind == CONST0:
            polys.append([0])
        elif gate.kind == CONST1:
            polys.append([1])
        elif gate.kind == VAR:
            polys.append([0, 1])
        elif gate.kind == NOT:
            child = gate.inputs[0]
            width = len(scopes[child])
            polys.append([comb(width, k) - polys[child][k] for k in range(width + 1)])
        elif gate.kind == AND:
            acc = [1]
            for r in gate.inputs:
                nxt = [0] * (len(acc) + len(polys[r]) - 1)
                for i, a in enumerate(acc):
                    if a:
                        for j, b in enumerate(polys[r]):
                            nxt[i + j] += a * b
                acc = nxt
            polys.append(acc)
        else:
            width = len(scopes[idx])
            acc = [0] * (width + 1)
            for r in gate.inputs:
                lifted = _shift_poly(polys[r], width - len(scopes[r]))
                for k, c in enumerate(lifted):
                    acc[k] += c
            polys.append(acc)
    out = _shift_poly(polys[circuit.output], circuit.var_count - len(scopes[circuit.output]))
    return tuple(out)


def unfold(circuit: Circuit) -> BoolFunc:
    """The circuit as a function tree (subtrees shared, so this stays small
    even for heavily shared DAGs)."""
    nodes: list[Node] = []
    for gate in circuit.gates:
        if gate.kind == CONST0:
            nodes.append(Const(0))
        elif gate.kind == CONST1:
            nodes.append(Const(1))
        elif gate.kind == VAR:
            nodes.append(FVar(gate.var))
        elif gate.kind == NOT:
            nodes.append(FNot(nodes[gate.inputs[0]]))
        elif gate.kind == AND:
            nodes.append(FAnd(tuple(nodes[r] for r in gate.inputs)))
        else:
            nodes.append(FOr(tuple(nodes[r] for r in gate.inputs)))
    return BoolFunc(nodes[circuit.output], circuit.var_count)


# ---------------------------------------------------------------------------
# Substitution of a variable by a disjunction of fresh variables


def literal_occurrences(circuit: Circuit, var: int) -> int:
    """Number of edges into gates representing the variable or its negation
    (the output counts as one edge)."""
    literal_gates = set()
    for idx, gate in enumerate(circuit.gates):
        if gate.kind == VAR and gate.var == var:
            literal_gates.add(idx)
        elif gate.kind == NOT and gate.inputs[0] in literal_gates:
            literal_gates.add(idx)
    count = 1 if circuit.output in literal_gates else 0
    for gate in circuit.gates:
        count += sum(1 for r in gate.inputs if r in literal_gates)
    return count


@dataclass(frozen=True, eq=False)
class CircuitSubstitution:
    circuit: Circuit
    old_to_new: dict[int, int]
    fresh: tuple[int, ...]


def or_substitute_circuit(circuit: Circuit, var: int, ell: int) -> CircuitSubstitution:
    """Replace a variable by a disjunction of `ell` fresh variables while
    preserving determinism and decomposability.

    Positive occurrences become the exclusive chain

        D(Z_i..Z_l) = Z_i or (not Z_i and D(Z_(i+1)..Z_l))

    and negated occurrences become `not Z_1 and ... and not Z_l`; with
    ell = 0 they become the constants 0 and 1.  Negation must sit directly
    above variable gates on every path that contains the variable (gate
    growth stays within 6*k*ell gates for k literal occurrences).

    Surviving variables are re-densified (old j maps to j-1 for j > var);
    the fresh variables take the last `ell` indices.
    """
    n = circuit.var_count
    if not 0 <= var < n:
        raise InputError(f"no variable {var} to substitute")
    if ell < 0:
        raise InputError("the replacement width must be nonnegative")
    scopes = circuit.scopes()
    for idx, gate in enumerate(circuit.gates):
        if gate.kind == NOT:
            child = gate.inputs[0]
            if circuit.gates[child].kind != VAR and var in scopes[child]:
                raise InputError(
                    f"gate {idx}: negation above a non-variable gate on the substituted "
                    "variable's path; push negation to the leaves first"
                )

    builder = CircuitBuilder(n - 1 + ell)
    zs = tuple(range(n - 1, n - 1 + ell))
    if ell == 0:
        pos_root = builder.add(CONST0)
        neg_root = builder.add(CONST1)
    elif ell == 1:
        pos_root = builder.add(VAR, var=zs[0])
        neg_root = builder.add(NOT, inputs=(pos_root,))
    else:
        var_gates = [builder.add(VAR, var=z) for z in zs]
        not_gates = {}
        chain = var_gates[-1]
        for i in range(ell - 2, -1, -1):
            not_gates[i] = builder.add(NOT, inputs=(var_gates[i],))
            guarded = builder.add(AND, inputs=(not_gates[i], chain))
            chain = builder.add(OR, inputs=(var_gates[i], guarded))
        pos_root = chain
        not_gates[ell - 1] = builder.add(NOT, inputs=(var_gates[ell - 1],))
        neg_root = builder.add(AND, inputs=tuple(not_gates[i] for i in range(ell)))

    mapping: dict[int, int] = {}
    var_gate_ids = set()
    for idx, gate in enumerate(circuit.gates):
        if gate.kind == VAR:
            if gate.var == var:
                var_gate_ids.add(idx)
                mapping[idx] = pos_root
            else:
                new_index = gate.var if gate.var < var else gate.var - 1
                mapping[idx] = builder.add(VAR, var=new_index)
        elif gate.kind == NOT and gate.inputs[0] in var_gate_ids:
            mapping[idx] = neg_root
        else:
            mapping[idx] = builder.add(gate.kind, inputs=tuple(mapping[r] for r in gate.inputs))

    result = builder.build(
        mapping[circuit.output],
        deterministic_by_construction=circuit.deterministic_by_construction,
    )
    old_to_new = {y: (y if y < var else y - 1) for y in range(n) if y != var}
    return CircuitSubstitution(result, old_to_new, zs)


def or_substitute_all(circuit: Circuit, ell: int) -> Circuit:
    """Replace every variable by a disjunction of `ell` fresh ones.

    Applied one variable at a time in descending index order, so each
    original variable still sits at its own index when its turn comes.
    """
    cur = circuit
    for i in range(circuit.var_count - 1, -1, -1):
        cur = or_substitute_circuit(cur, i, ell).circuit
    return cur


# ---------------------------------------------------------------------------
# Pipelines


def _certified_base(circuit, validation, determinism_bound):
    report = _countable(circuit, validation, determinism_bound)
    if report.determinism == "verified" and not circuit.deterministic_by_construction:
        # substitution preserves determinism, so don't re-verify the copies
        return circuit.certified(), report
    return circuit, report


def kcounts_circuit(
    circuit: Circuit,
    *,
    validation: ValidationReport | None = None,
    determinism_bound: int = DETERMINISM_BOUND,
) -> tuple[int, ...]:
    """Size-bucketed counts through the count-oracle reduction: one total
    model count per uniform replacement width, then a Vandermonde solve.
    Must agree with size_polynomial_count."""
    base, _ = _certified_base(circuit, validation, determinism_bound)

    def oracle(arities: tuple[int, ...]) -> int:
        widths = set(arities)
        if len(widths) > 1:
            raise InputError("this pipeline only issues uniform replacements")
        ell = widths.pop() if widths else 1
        substituted = or_substitute_all(base, ell)
        return model_count_dd(substituted, determinism_bound=determinism_bound)

    return reductions.kcounts_from_counts(circuit.var_count, oracle)


def shapley_circuit(
    circuit: Circuit,
    *,
    validation: ValidationReport | None = None,
    determinism_bound: int = DETERMINISM_BOUND,
) -> tuple[Fraction, ...]:
    """Exact Shapley vector through the k-count-oracle reduction; the
    variable-deleted cofactors are width-0 substitutions."""
    base, _ = _certified_base(circuit, validation, determinism_bound)

    def oracle(arities: tuple[int, ...]) -> tuple[int, ...]:
        target = base
        for i in range(len(arities) - 1, -1, -1):
            if arities[i] != 1:
                target = or_substitute_circuit(target, i, arities[i]).circuit
        return size_polynomial_count(target, determinism_bound=determinism_bound)

    return reductions.shapley_from_kcounts(circuit.var_count, oracle)
