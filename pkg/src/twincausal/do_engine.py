"""Simplified do-calculus: rule checks, pattern-based identification, and
plug-in evaluation of the resulting estimands.

Identification tries, in order, direct Rule 2, backdoor adjustment and the
front-door pattern. ``NotIdentified`` therefore means none of these
strategies applies; it is not a completeness claim.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Union

from .causal_graph import CausalGraph, RemoveIncoming, RemoveOutgoing, d_separated, mutilate
from .data_io import EmpiricalJoint
from .errors import LatentTreatment, MissingVariable, ZeroConditioningMass

# -- queries -----------------------------------------------------------------


@dataclass(frozen=True)
class DoQuery:
    """``P(outcome | do(treatment), context)``.

    ``dropped`` is the W of Rule 1 (variables removed from the conditioning
    set); the other rules ignore it.
    """

    treatment: str
    outcome: str
    context: frozenset = frozenset()
    dropped: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "context", frozenset(self.context))
        object.__setattr__(self, "dropped", frozenset(self.dropped))
        if self.treatment == self.outcome:
            raise ValueError("treatment and outcome must differ")
        if {self.treatment, self.outcome} & (self.context | self.dropped):
            raise ValueError("context must exclude treatment and outcome")


def _rule1(graph, treatment, outcome, dropped, context):
    g = mutilate(graph, treatment, RemoveIncoming)
    return d_separated(g, outcome, dropped, set(context) | set(treatment))


def _rule2(graph, treatment, outcome, context):
    g = mutilate(graph, treatment, RemoveOutgoing)
    return d_separated(g, outcome, treatment, context)


def _rule3(graph, treatment, outcome, context):
    g = mutilate(graph, treatment, RemoveIncoming)
    if not d_separated(g, outcome, treatment, context):
        return False
    desc = set()
    for t in treatment:
        desc |= graph.descendants(t)
    return not (set(context) & desc)


def rule_applies(rule: int, graph: CausalGraph, query: DoQuery) -> bool:
    """Whether do-calculus rule 1, 2 or 3 licenses its rewrite for ``query``."""
    graph.check({query.treatment, query.outcome} | query.context | query.dropped)
    t, y, z = {query.treatment}, {query.outcome}, set(query.context)
    if rule == 1:
        return _rule1(graph, t, y, set(query.dropped), z)
    if rule == 2:
        return _rule2(graph, t, y, z)
    if rule == 3:
        return _rule3(graph, t, y, z)
    raise ValueError(f"rule must be 1, 2 or 3, got {rule!r}")


# -- estimand expression tree -------------------------------------------------


@dataclass(frozen=True)
class Ref:
    """An occurrence of ``variable`` bound to the index ``symbol``."""

    variable: str
    symbol: str

    def __str__(self):
        return self.symbol


@dataclass(frozen=True)
class CondProb:
    target: tuple[Ref, ...]
    given: tuple[Ref, ...] = ()

    def __str__(self):
        t = ",".join(map(str, self.target))
        if not self.given:
            return f"P({t})"
        return f"P({t}|{','.join(map(str, self.given))})"


@dataclass(frozen=True)
class Marginal:
    target: tuple[Ref, ...]

    def __str__(self):
        return f"P({','.join(map(str, self.target))})"


@dataclass(frozen=True)
class Product:
    terms: tuple

    def __str__(self):
        return " ".join(map(str, self.terms))


@dataclass(frozen=True)
class SumOver:
    ref: Ref
    body: "Node"

    def __str__(self):
        return f"sum_{self.ref.symbol} {self.body}"


Node = Union[CondProb, Marginal, Product, SumOver]


def _node_to_dict(node) -> dict:
    if isinstance(node, SumOver):
        return {"kind": "sum", "variable": node.ref.variable, "symbol": node.ref.symbol,
                "body": _node_to_dict(node.body)}
    if isinstance(node, Product):
        return {"kind": "product", "terms": [_node_to_dict(t) for t in node.terms]}
    refs = lambda rs: [[r.variable, r.symbol] for r in rs]  # noqa: E731
    if isinstance(node, CondProb):
        return {"kind": "cond", "target": refs(node.target), "given": refs(node.given)}
    if isinstance(node, Marginal):
        return {"kind": "marginal", "target": refs(node.target)}
    raise TypeError(f"not an estimand node: {node!r}")


@dataclass(frozen=True)
class Estimand:
    """An expression over the pre-intervention joint, with the treatment and
    outcome occurrences left free (they are filled by ``t_star``/``y``)."""

    expr: Node
    treatment: Ref
    outcome: Ref

    def __str__(self):
        return str(self.expr)

    def to_dict(self) -> dict:
        return {
            "treatment": [self.treatment.variable, self.treatment.symbol],
            "outcome": [self.outcome.variable, self.outcome.symbol],
            "expr": _node_to_dict(self.expr),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def variables(self) -> set[str]:
        out = set()

        def walk(node):
            if isinstance(node, SumOver):
                out.add(node.ref.variable)
                walk(node.body)
            elif isinstance(node, Product):
                for t in node.terms:
                    walk(t)
            else:
                out.update(r.variable for r in node.target)
                out.update(r.variable for r in getattr(node, "given", ()))

        walk(self.expr)
        return out


# -- identification -----------------------------------------------------------


@dataclass(frozen=True)
class RuleRecord:
    rule: int
    statement: str
    graph: str

    def __str__(self):
        return f"Rule {self.rule} in {self.graph}: {self.statement}"


@dataclass(frozen=True)
class Identified:
    estimand: Estimand
    derivation: tuple[RuleRecord, ...]
    method: str
    adjustment: tuple[str, ...] = ()

    identified = True

    def __post_init__(self):
        if not self.derivation:
            raise ValueError("an identified query needs a derivation")


@dataclass(frozen=True)
class NotIdentified:
    reason: str
    identified = False


IdentificationResult = Union[Identified, NotIdentified]


def _symbols(graph: CausalGraph) -> dict[str, str]:
    lowered = [n.lower() for n in graph.names]
    if len(set(lowered)) == len(lowered):
        return {n: n.lower() for n in graph.names}
    return {n: n for n in graph.names}


def _nest_sums(refs, body):
    for ref in reversed(refs):
        body = SumOver(ref, body)
    return body


def _fmt(names):
    return ",".join(sorted(names))


def identify(graph: CausalGraph, treatment: str, outcome: str) -> IdentificationResult:
    """Express ``P(outcome | do(treatment))`` over the observational joint."""
    graph.check([treatment, outcome])
    if treatment == outcome:
        raise ValueError("treatment and outcome must differ")
    if not graph.var(treatment).observed:
        raise LatentTreatment(f"treatment {treatment!r} is latent")
    if not graph.var(outcome).observed:
        raise LatentTreatment(f"outcome {outcome!r} is latent")

    sym = _symbols(graph)
    t = Ref(treatment, sym[treatment])
    y = Ref(outcome, sym[outcome])
    T, Y = {treatment}, {outcome}

    # (a) P(y|do(t)) = P(y|t)
    if _rule2(graph, T, Y, set()):
        rec = RuleRecord(2, f"P({y}|do({t})) = P({y}|{t})", f"G_{treatment}_")
        return Identified(Estimand(CondProb((y,), (t,)), t, y), (rec,), "direct")

    # (b) backdoor: sum_z P(y|t,z) P(z)
    desc_t = graph.descendants(treatment)
    candidates = sorted(
        n for n in graph.observed if n not in T | Y and n not in desc_t
    )
    for size in range(1, len(candidates) + 1):
        for zset in itertools.combinations(candidates, size):
            if not _rule2(graph, T, Y, set(zset)):
                continue
            if not _rule3(graph, T, set(zset), set()):
                continue
            zrefs = tuple(Ref(z, sym[z]) for z in zset)
            zs = ",".join(r.symbol for r in zrefs)
            body = Product((CondProb((y,), (t,) + zrefs), Marginal(zrefs)))
            derivation = (
                RuleRecord(2, f"P({y}|do({t}),{zs}) = P({y}|{t},{zs})", f"G_{treatment}_"),
                RuleRecord(3, f"P({zs}|do({t})) = P({zs})", f"G_{treatment}^"),
            )
            return Identified(
                Estimand(_nest_sums(zrefs, body), t, y), derivation, "backdoor", zset
            )

    # (c) front-door: sum_w P(w|t) sum_t' P(y|t',w) P(t')
    mediators = sorted(n for n in graph.observed if n not in T | Y)
    for size in range(1, len(mediators) + 1):
        for wset in itertools.combinations(mediators, size):
            W = set(wset)
            if not all(w in desc_t for w in W):
                continue
            # W intercepts every directed path T -> Y
            if graph.has_directed_path(treatment, outcome, avoiding=W):
                continue
            if not _rule2(graph, T, W, set()):
                continue
            if not _rule2(graph, W, Y, T):
                continue
            if not _rule3(graph, W, T, set()):
                continue
            wrefs = tuple(Ref(w, sym[w]) for w in wset)
            tp = Ref(treatment, sym[treatment] + "'")
            inner = _nest_sums((tp,), Product((CondProb((y,), (tp,) + wrefs), Marginal((tp,)))))
            body = Product((CondProb(wrefs, (t,)), inner))
            ws = ",".join(r.symbol for r in wrefs)
            derivation = (
                RuleRecord(2, f"P({ws}|do({t})) = P({ws}|{t})", f"G_{treatment}_"),
                RuleRecord(2, f"P({y}|do({ws}),{t}) = P({y}|{ws},{t})", f"G_{_fmt(W)}_"),
                RuleRecord(3, f"P({t}|do({ws})) = P({t})", f"G_{_fmt(W)}^"),
            )
            return Identified(
                Estimand(_nest_sums(wrefs, body), t, y), derivation, "frontdoor", wset
            )

    return NotIdentified("no strategy applies")


# -- plug-in evaluation -------------------------------------------------------


def _assign(refs, env):
    out = {}
    for r in refs:
        try:
            var, state = env[r.symbol]
        except KeyError:
            raise MissingVariable(f"unbound symbol {r.symbol!r}") from None
        out[var] = state
    return out


def _eval(node, joint: EmpiricalJoint, env, cards) -> float:
    if isinstance(node, SumOver):
        v = node.ref.variable
        terms = [
            _eval(node.body, joint, {**env, node.ref.symbol: (v, s)}, cards)
            for s in range(cards[v])
        ]
        return math.fsum(terms)
    if isinstance(node, Product):
        # a factor undefined for lack of data is harmless next to an exact zero
        out, undefined = 1.0, None
        for term in node.terms:
            try:
                value = _eval(term, joint, env, cards)
            except ZeroConditioningMass as err:
                undefined = undefined or err
                continue
            if value == 0.0:
                return 0.0
            out *= value
        if undefined is not None:
            raise undefined
        return out
    if isinstance(node, CondProb):
        return joint.cond(_assign(node.target, env), _assign(node.given, env))
    if isinstance(node, Marginal):
        return joint.prob(_assign(node.target, env))
    raise TypeError(f"not an estimand node: {node!r}")


def evaluate_estimand(estimand: Estimand, joint: EmpiricalJoint, t_star: int, y: int) -> float:
    """Plug the empirical joint into ``estimand`` at ``T=t_star, Y=y``."""
    missing = estimand.variables() - set(joint.variables)
    if missing:
        raise MissingVariable(f"joint lacks variables {sorted(missing)}")
    cards = dict(zip(joint.variables, joint.cards))
    env = {
        estimand.treatment.symbol: (estimand.treatment.variable, int(t_star)),
        estimand.outcome.symbol: (estimand.outcome.variable, int(y)),
    }
    return _eval(estimand.expr, joint, env, cards)
