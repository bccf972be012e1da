"""Command-line entry point: ``disentangle {pe,scan,verify,search}``.

Exit codes: 0 success, 1 verdict mismatch, 2 usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from typing import Sequence

import numpy as np

from . import channels, distinguish, feasibility, nogo
from .entanglement import ppt_verdict
from .qstate import maximally_mixed, partial_trace, trace_distance

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_IO = 3

_ANGLE = re.compile(r"^\s*([+-]?(?:\d+\.?\d*|\.\d+)?)\s*\*?\s*pi\s*(?:/\s*(\d+\.?\d*|\.\d+))?\s*$")


def parse_angle(text: str) -> float:
    """Radians from ``"0.3"``, ``"pi/8"``, ``"3pi/8"``, ``"-0.5*pi"`` and the like."""
    m = _ANGLE.match(text)
    if m:
        coeff = m.group(1)
        if coeff in ("", "+"):
            factor = 1.0
        elif coeff == "-":
            factor = -1.0
        else:
            factor = float(coeff)
        denom = float(m.group(2)) if m.group(2) else 1.0
        if denom == 0:
            raise argparse.ArgumentTypeError(f"bad angle {text!r}: division by zero")
        return factor * math.pi / denom
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad angle {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"angle must be finite, got {text!r}")
    return value


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    return str(x)


def _positive_int(lo: int):
    def parse(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if v < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {v}")
        return v

    return parse


# ---------------------------------------------------------------------------
# Payload writers


def rows_to_csv(fields: Sequence[str], rows: Sequence[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([fmt(row[f]) for f in fields])
    return buf.getvalue()


def _jsonable(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def to_json(payload) -> str:
    return json.dumps(_jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _emit(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


# ---------------------------------------------------------------------------
# Commands


def pe_record(theta: float, phi: float) -> dict:
    p = distinguish.FamilyParams(theta, phi)
    psi0, psi1 = distinguish.build_family(p)
    entries = distinguish.delta_entries(p)
    ent, disent = distinguish.pe_ent(p), distinguish.pe_disent(p)
    return {
        "theta": theta,
        "phi": phi,
        "overlap": distinguish.family_overlap(p),
        "overlap_matrix": abs(np.vdot(psi0.amplitudes, psi1.amplitudes)),
        "pe_ent": ent,
        "pe_ent_matrix": distinguish.pe_ent_matrix(p),
        "pe_disent": disent,
        "pe_disent_matrix": distinguish.pe_disent_matrix(p),
        "a": entries.a,
        "b": entries.b,
        "prefactor": entries.prefactor,
        "violation": distinguish.is_violation(ent, disent),
    }


PE_FIELDS = [
    "theta", "phi", "overlap", "overlap_matrix", "pe_ent", "pe_ent_matrix",
    "pe_disent", "pe_disent_matrix", "a", "b", "prefactor", "violation",
]
SCAN_FIELDS = ["theta", "phi", "pe_ent", "pe_disent", "violation"]


def cmd_pe(args) -> int:
    rec = pe_record(args.theta, args.phi)
    if args.format == "json":
        _emit(to_json(rec), args.out)
    elif args.format == "csv":
        _emit(rows_to_csv(PE_FIELDS, [rec]), args.out)
    else:
        width = max(map(len, PE_FIELDS))
        _emit("".join(f"{k:<{width}}  {fmt(rec[k])}\n" for k in PE_FIELDS), args.out)
    return EXIT_OK


def scan_rows(grid_n: int) -> list[dict]:
    return [
        {
            "theta": r.params.theta,
            "phi": r.params.phi,
            "pe_ent": r.pe_ent,
            "pe_disent": r.pe_disent,
            "violation": r.violation,
        }
        for r in distinguish.violation_scan(grid_n)
    ]


def cmd_scan(args) -> int:
    rows = scan_rows(args.grid_n)
    if args.format == "json":
        text = to_json(rows)
    else:
        text = rows_to_csv(SCAN_FIELDS, rows)
    _emit(text, args.out)
    n_bad = sum(r["violation"] for r in rows)
    summary = f"violating cells: {n_bad} of {len(rows)}\n"
    (sys.stderr if args.out in (None, "-") else sys.stdout).write(summary)
    return EXIT_OK


def _line(ok: bool, text: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] {text}"


def verify_swap_bell() -> tuple[bool, list[str]]:
    lines = []
    swap = channels.swap_disentangler()
    target = maximally_mixed(4, (2, 2))
    ok_all = True
    for s in (nogo.bell_set(False), nogo.bell_set(True)):
        rep = nogo.check_disentanglement(swap, s, "separable")
        ok = rep.verdict is nogo.Verdict.DISENTANGLES_SEPARABLE
        ok_all &= ok
        lines.append(_line(ok, f"swap disentangler on {s.name}: {rep.verdict.value}"))
    worst = max(
        trace_distance(channels.apply(swap, psi.density()), target) for psi in nogo.bell_variants()
    )
    ok = worst < 1e-10
    ok_all &= ok
    lines.append(_line(ok, f"max trace distance of outputs to I/4: {worst:.3e}"))
    return ok_all, lines


def verify_three_state(pairs: int = 1000, seed: int = 0) -> tuple[bool, list[str]]:
    lines = []
    s = nogo.three_state_set()
    witness = channels.dephasing_witness()
    sep = nogo.check_disentanglement(witness, s, "separable")
    prod = nogo.check_disentanglement(witness, s, "product")
    out = channels.apply(witness, s.states[2].density())
    marg_ok = all(
        trace_distance(partial_trace(out, k), maximally_mixed(2)) <= 1e-10 for k in "XY"
    )
    ok1 = sep.verdict is nogo.Verdict.DISENTANGLES_SEPARABLE and marg_ok and ppt_verdict(out).separable
    lines.append(_line(ok1, f"alpha = 0 witness, separable mode: {sep.verdict.value}"))
    ok2 = prod.verdict is nogo.Verdict.FAILS
    lines.append(_line(ok2, f"alpha = 0 witness, product mode: {prod.verdict.value}"))

    rng = np.random.default_rng(seed)
    gaps = []
    for k in range(pairs):
        d = 2 + k % 7
        e = nogo.random_unit_vectors(rng, 2, d)
        gaps.append(nogo.product_impossibility_gap(e[0], e[1]))
    gap = min(gaps)
    ok3 = gap >= 0.5 - 1e-10
    lines.append(_line(ok3, f"product gap over {pairs} random ancilla pairs: min {gap:.12f} (>= 1/2)"))
    return ok1 and ok2 and ok3, lines


def verify_four_state(samples: int = 100000, seed: int = 0) -> tuple[bool, list[str]]:
    lines = []
    s = nogo.four_state_set()
    rep = nogo.check_disentanglement(channels.dephasing_witness(), s, "separable")
    ok1 = rep.verdict is nogo.Verdict.FAILS
    lines.append(_line(ok1, f"alpha = 0 witness on four-state set: {rep.verdict.value}"))

    bound = nogo.ORTHOGONAL_RESIDUAL_BOUND
    inf, g = nogo.unitarity_residual_infimum()
    num, _ = nogo.minimize_unitarity_residual(3, 10, seed)
    rng = np.random.default_rng(seed)
    sampled = math.inf
    per_dim = samples // 7
    for d in range(2, 9):
        e0, e1, ep = (nogo.random_unit_vectors(rng, per_dim, d) for _ in range(3))
        sampled = min(sampled, float(nogo.unitarity_residuals(e0, e1, ep).min()))
    lines.append(f"       residual bound with <E0|E1> = 0 enforced: {bound:.8f} (3 - 2 sqrt 2)")
    lines.append(f"       residual infimum over all triples: {inf:.8f} at |<E0|E1>| = {g:.6f}")
    lines.append(f"       numerical minimum: {num:.8f}; sampled minimum ({7 * per_dim} triples): {sampled:.8f}")
    ok2 = inf > 0.1 and num > 0.1 and sampled >= inf - 1e-12
    lines.append(_line(ok2, "unitarity constraints cannot all hold: residual bounded away from 0"))
    return ok1 and ok2, lines


VERIFY_TARGETS = {
    "swap-bell": verify_swap_bell,
    "three-state": verify_three_state,
    "four-state": verify_four_state,
}


def cmd_verify(args) -> int:
    ok, lines = VERIFY_TARGETS[args.target]()
    print("\n".join(lines))
    print("PASS" if ok else "FAIL")
    return EXIT_OK if ok else EXIT_MISMATCH


def cmd_search(args) -> int:
    s = nogo.STATE_SETS[args.set]()
    report = feasibility.feasibility_search(
        s, args.mode, args.ancilla_dim, args.restarts, args.seed, workers=args.workers
    )
    payload = to_json(report.to_dict())
    if args.out is not None:
        _emit(payload, args.out)
    print(f"best objective: {fmt(report.best_objective)} over {report.restarts} restarts")
    if report.best_objective > 1e-6:
        print(report.note)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="disentangle", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("pe", help="error probabilities at one (theta, phi)")
    pe.add_argument("--theta", type=parse_angle, default=math.pi / 8)
    pe.add_argument("--phi", type=parse_angle, default=math.pi / 8)
    pe.add_argument("--format", choices=["text", "csv", "json"], default="text")
    pe.add_argument("--out", default=None)
    pe.set_defaults(func=cmd_pe)

    scan = sub.add_parser("scan", help="closed-form grid scan over (0, pi/4)^2")
    scan.add_argument("--grid-n", type=_positive_int(2), default=64)
    scan.add_argument("--format", choices=["csv", "json"], default="csv")
    scan.add_argument("--out", default=None)
    scan.set_defaults(func=cmd_scan)

    ver = sub.add_parser("verify", help="check one of the analytic results")
    ver.add_argument("target", choices=sorted(VERIFY_TARGETS))
    ver.set_defaults(func=cmd_verify)

    se = sub.add_parser("search", help="numerical search for a disentangling channel")
    se.add_argument("--set", choices=sorted(nogo.STATE_SETS), required=True)
    se.add_argument("--mode", choices=["separable", "product"], default="separable")
    se.add_argument("--ancilla-dim", type=_positive_int(2), default=4)
    se.add_argument("--restarts", type=_positive_int(1), default=20)
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("--workers", type=_positive_int(1), default=1)
    se.add_argument("--out", default=None)
    se.set_defaults(func=cmd_search)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "ancilla_dim", 2) > 8:
        parser.error("--ancilla-dim must be in [2, 8]")
    try:
        return args.func(args)
    except OSError as exc:
        print(f"disentangle: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
