"""Instance bundles on disk and the verification report for generated reductions."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field

from .. import nfa
from ..formula import FormulaPairInstance, arity, brute_force_pair
from ..pattern import Problem, fits_type, parse_pattern, render_pattern, size
from .builders import ReductionInstance, build_reduction, check_helper, encode_opoc
from .changes import check_change_claim
from .gadgets import COP, CPO, CS, MATCHING_TYPES, OPOC, encode_gates

META_KEYS = ("type", "problem", "n", "m", "s", "d", "seed", "swapped")


def write_bundle(prefix, ri: ReductionInstance) -> list[str]:
    """Write ``<prefix>.text``, ``<prefix>.pattern`` and ``<prefix>.meta``; returns the paths."""
    paths = [f"{prefix}.text", f"{prefix}.pattern", f"{prefix}.meta"]
    d = os.path.dirname(os.fspath(prefix))
    if d:
        os.makedirs(d, exist_ok=True)
    with open(paths[0], "w", encoding="utf-8") as fh:
        fh.write(ri.text + "\n")
    with open(paths[1], "w", encoding="utf-8") as fh:
        fh.write(render_pattern(ri.pattern) + "\n")
    keys = list(META_KEYS) + sorted(k for k in ri.meta if k not in META_KEYS)
    with open(paths[2], "w", encoding="utf-8") as fh:
        for k in keys:
            if k in ri.meta:
                v = ri.meta[k]
                fh.write(f"{k}={'' if v is None else v}\n")
    return paths


def _meta_value(v: str):
    if v == "":
        return None
    try:
        return int(v)
    except ValueError:
        return v


def read_bundle(prefix) -> ReductionInstance:
    with open(f"{prefix}.text", encoding="utf-8") as fh:
        text = fh.read().rstrip("\n")
    with open(f"{prefix}.pattern", encoding="utf-8") as fh:
        pattern = parse_pattern(fh.read().rstrip("\n"))
    meta = {}
    with open(f"{prefix}.meta", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            k, sep, v = line.partition("=")
            if not sep:
                raise ValueError(f"bad meta line {line!r}")
            meta[k.strip()] = _meta_value(v.strip())
    return ReductionInstance(text, pattern, meta)


@dataclass
class VerifyReport:
    expected: bool
    baseline: bool
    text_len: int
    pattern_size: int
    checks: dict = field(default_factory=dict)  # name -> bool

    @property
    def agree(self) -> bool:
        return self.expected == self.baseline

    @property
    def ok(self) -> bool:
        return self.agree and all(self.checks.values())

    @property
    def failed(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def lines(self) -> list[str]:
        out = [
            f"pair exists: {str(self.expected).lower()}",
            f"baseline: {str(self.baseline).lower()}",
            f"|t|={self.text_len} size(p)={self.pattern_size}",
        ]
        out += [f"check {k}: {'ok' if v else 'FAILED'}" for k, v in self.checks.items()]
        out.append("AGREE" if self.ok else "DISAGREE")
        return out


def _gadget_triple(inst: FormulaPairInstance, kind: str, limit: int = 16) -> bool:
    """The per-gadget triple at the root, for the instance's own pairs (up to ``limit`` of them)."""
    if inst.m > inst.n:
        inst = inst.swapped()
    root = encode_gates(inst.F, kind)[()]
    q = nfa.compile_nfa(root.q_pattern())
    if not nfa.nfa_member(root.u, q):
        return False
    from ..formula import evaluate

    for a, b in itertools.islice(itertools.product(inst.A, inst.B), limit):
        t = root.t_of(a)
        p = nfa.compile_nfa(root.p_of(b))
        if not nfa.nfa_member(t, q) or not nfa.nfa_member(root.u, p):
            return False
        if nfa.nfa_member(t, p) != evaluate(inst.F, a, b):
            return False
    return True


def verify_reduction(ri: ReductionInstance, inst: FormulaPairInstance) -> VerifyReport:
    """Check ``ri`` against ``inst``: verdicts, provenance and the construction's own invariants."""
    inst.validate(nonempty=True)
    kind = ri.type
    problem = ri.problem
    expected = brute_force_pair(inst) is not None
    if problem is Problem.MATCHING:
        baseline = nfa.nfa_match(ri.text, ri.pattern)
    else:
        baseline = nfa.nfa_member(ri.text, ri.pattern)
    checks: dict[str, bool] = {}
    meta = ri.meta
    checks["meta"] = (meta.get("n") in (inst.n, inst.m) and meta.get("m") in (inst.n, inst.m)
                      and meta.get("s") == inst.s and meta.get("d") == inst.d
                      and meta.get("text_len", len(ri.text)) == len(ri.text))
    checks["type"] = fits_type(ri.pattern, kind)
    regen = build_reduction(inst, kind, problem, seed=meta.get("seed"))
    checks["regenerate"] = regen.text == ri.text and regen.pattern == ri.pattern
    if kind in MATCHING_TYPES:
        checks["gadget"] = _gadget_triple(inst, kind)
    if kind in (CS, CPO, COP):
        root = encode_gates(inst.F if inst.m <= inst.n else inst.swapped().F, kind)[()]
        checks["helper"] = check_helper(kind, root.u).ok
    if kind == CS:
        F = inst.F if inst.m <= inst.n else inst.swapped().F
        ka = arity(F)[0]
        asg = ["".join(x) for x in itertools.islice(itertools.product("01", repeat=ka), 16)]
        checks["changes"] = all(c.ok for c in check_change_claim(encode_gates(F, kind), asg))
    if kind == OPOC:
        F = inst.F if inst.m <= inst.n else inst.swapped().F
        checks["dictionary"] = all(w for g in encode_opoc(F).values() for w in g.DS)
    return VerifyReport(expected, baseline, len(ri.text), size(ri.pattern), checks)
