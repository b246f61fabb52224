"""Command-line front end: parse a curve, compute its zeta function, report."""

from __future__ import annotations

import argparse
import json
import os
import resource
import sys
import time
from dataclasses import dataclass, replace

from . import __version__
from .curve import CurveSpec, validate_curve
from .errors import HypZetaError, ParseError, PrecisionError
from .oracle import verify
from .zeta import assemble_zeta

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECISION = 3
EXIT_MISMATCH = 4
EXIT_BUDGET = 5

_FILE_KEYS = {
    "p", "n", "modulus", "P", "precision", "guard", "trunc",
    "basis", "verify", "format", "threads",
}  # fmt: skip


@dataclass(frozen=True)
class JobConfig:
    p: int
    n: int
    P: tuple
    modulus: tuple | None = None
    precision: int | None = None
    guard: int | str | None = None
    trunc: int | None = None
    basis: str = "y1"
    verify: int = 0
    format: str = "text"
    threads: int = 1
    telemetry: bool = True


# -- parsing --------------------------------------------------------------------


class _Scanner:
    def __init__(self, text: str, what: str):
        self.text, self.pos, self.what = text, 0, what

    def error(self, msg: str):
        raise ParseError(f"{self.what}: {msg} in {self.text!r}", self.pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self) -> int:
        self.skip()
        start = self.pos
        if self.peek() in "+-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        token = self.text[start : self.pos]
        if not token.lstrip("+-"):
            self.pos = start
            self.error("expected an integer")
        return int(token)

    def expect(self, ch: str):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1


def parse_int_list(text: str, what: str = "list") -> tuple[int, ...]:
    """'1, -2, 3' -> (1, -2, 3)."""
    sc = _Scanner(text, what)
    out = [sc.integer()]
    while sc.peek() == ",":
        sc.pos += 1
        out.append(sc.integer())
    if sc.peek():
        sc.error("unexpected character")
    return tuple(out)


def parse_coefficients(text: str, n: int) -> tuple:
    """Coefficients of P, constant term first.

    Each entry is an integer or, for n > 1, a bracketed list of n integers
    (coordinates on 1, t, ..., t^(n-1)); a bare integer c means c * 1.
    """
    sc = _Scanner(text, "P")
    out = []
    while True:
        if sc.peek() == "[":
            start = sc.pos
            sc.pos += 1
            coords = [sc.integer()]
            while sc.peek() == ",":
                sc.pos += 1
                coords.append(sc.integer())
            sc.expect("]")
            if len(coords) != n:
                sc.pos = start
                sc.error(f"bracketed coefficient has {len(coords)} entries, need n = {n}")
            out.append(tuple(coords))
        else:
            out.append(sc.integer())
        if sc.peek() == ",":
            sc.pos += 1
            continue
        if sc.peek():
            sc.error("unexpected character")
        return tuple(out)


def read_curve_file(path: str) -> dict[str, str]:
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ParseError(f"cannot read curve file {path!r}: {exc.strerror}") from exc
    for lineno, line in enumerate(lines, 1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError(f"{path}: expected 'key = value' on line {lineno}")
        key, value = (s.strip() for s in body.split("=", 1))
        key = key.lstrip("-")
        if key == "curve-file" or key not in _FILE_KEYS:
            raise ParseError(f"{path}: unknown key {key!r} on line {lineno}")
        values[key] = value
    return values


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hypzeta",
        description="Zeta function and Jacobian order of y^2 = P(x) over F_q (q = p^n, p odd).",
    )
    ap.add_argument("--p", help="odd prime p")
    ap.add_argument("--n", help="extension degree n (default 1)")
    ap.add_argument("--modulus", help="F_q modulus, constant term first, monic of degree n")
    ap.add_argument("--P", dest="P", help='coefficients of P, constant first, e.g. "0,-1,0,1" or "[1,1],[0,1],0,1"')
    ap.add_argument("--precision", help="target digits N (must pin the coefficients)")
    ap.add_argument("--guard", help="guard digits: absolute count or +k over the minimum")
    ap.add_argument("--trunc", help="truncation order K of the Frobenius series")
    ap.add_argument("--basis", help="y1 (x^i dx/y, default) or y3 (x^i dx/y^3)")
    ap.add_argument("--verify", help="compare against brute-force counts for m = 1..M")
    ap.add_argument("--format", help="text (default) or json-like")
    ap.add_argument("--threads", help="worker processes (default: available CPUs)")
    ap.add_argument("--curve-file", help="file of 'key = value' lines using the flag names")
    ap.add_argument("--no-telemetry", action="store_true", help="omit wall time and memory for byte-stable output")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return ap


def _int(value: str, key: str) -> int:
    try:
        return int(value.strip())
    except ValueError:
        raise ParseError(f"{key}: {value!r} is not an integer") from None


def parse_input(argv=None) -> tuple[JobConfig, CurveSpec]:
    """Flags override curve-file values.  Raises ParseError or the curve's validation error."""
    args = build_parser().parse_args(argv)
    values = read_curve_file(args.curve_file) if args.curve_file else {}
    for key in _FILE_KEYS:
        flag = getattr(args, key)
        if flag is not None:
            values[key] = flag
    if "p" not in values or "P" not in values:
        raise ParseError("both p and P are required")
    p = _int(values["p"], "p")
    n = _int(values.get("n", "1"), "n")
    if n < 1:
        raise ParseError("n must be >= 1")
    guard = values.get("guard")
    if guard is not None:
        guard = guard.strip()
        if guard.startswith("+"):
            _int(guard[1:], "guard")
        else:
            guard = _int(guard, "guard")
    basis = values.get("basis", "y1").strip()
    if basis not in ("y1", "y3"):
        raise ParseError(f"basis must be y1 or y3, got {basis!r}")
    fmt = values.get("format", "text").strip()
    if fmt not in ("text", "json-like"):
        raise ParseError(f"format must be text or json-like, got {fmt!r}")
    threads = _int(values["threads"], "threads") if "threads" in values else (os.cpu_count() or 1)
    job = JobConfig(
        p=p,
        n=n,
        P=parse_coefficients(values["P"], n),
        modulus=parse_int_list(values["modulus"], "modulus") if "modulus" in values else None,
        precision=_int(values["precision"], "precision") if "precision" in values else None,
        guard=guard,
        trunc=_int(values["trunc"], "trunc") if "trunc" in values else None,
        basis=basis,
        verify=_int(values.get("verify", "0"), "verify"),
        format=fmt,
        threads=max(1, threads),
        telemetry=not args.no_telemetry,
    )
    spec = CurveSpec.create(p, job.P, n=n, modulus=job.modulus)
    validate_curve(spec, 1)
    return replace(job, modulus=tuple(spec.field.modulus)), spec


# -- running ------------------------------------------------------------------------


def _peak_rss_kib() -> int:
    own = resource.getrusage(resource.RUSAGE_SELF).ru_maxrss
    kids = resource.getrusage(resource.RUSAGE_CHILDREN).ru_maxrss
    return max(own, kids)


def _input_echo(job: JobConfig, spec: CurveSpec) -> dict:
    return {
        "p": spec.p,
        "n": spec.n,
        "q": spec.q,
        "modulus": list(spec.field.modulus),
        "P": spec.coefficient_list(),
        "genus": spec.g,
        "basis": job.basis,
        "threads": job.threads,
    }


def run(job: JobConfig, spec: CurveSpec) -> tuple[int, dict]:
    """Run the pipeline; returns (exit status, report)."""
    t0 = time.perf_counter()
    report = {"version": __version__, "input": _input_echo(job, spec)}
    status = EXIT_OK
    overrides = {k: v for k, v in (("N", job.precision), ("guard", job.guard), ("K", job.trunc)) if v is not None}
    try:
        result = assemble_zeta(spec, basis=job.basis, workers=job.threads, **overrides)
    except PrecisionError as exc:
        return _failure(report, EXIT_PRECISION, exc, job, t0)
    except (HypZetaError, ValueError) as exc:
        return _failure(report, EXIT_INPUT, exc, job, t0)
    plan = result.plan
    lifted = validate_curve(spec, plan.Nw)
    report["input"]["P_lift"] = [list(c) if spec.n > 1 else c[0] for c in lifted.P.rows]
    report["plan"] = {
        "N": plan.N,
        "guard": plan.guard,
        "Nw": plan.Nw,
        "K": plan.K,
        "denominator_digits": plan.denominator_digits,
    }
    report["Q"] = list(result.Q)
    report["group_order"] = result.group_order
    report["counts"] = {str(m): c for m, c in enumerate(result.counts, 1)}
    diag = dict(result.diagnostics)
    report["det_mod_pN"] = diag.pop("det_mod_pN", None)
    report["guard_consumed"] = diag
    if job.verify > 0:
        rep = verify(spec, result.Q, job.verify, workers=job.threads)
        report["verification"] = [
            {"m": e.m, "predicted": e.predicted, "counted": e.counted, "status": e.status} for e in rep.entries
        ]
        if rep.mismatch:
            status = EXIT_MISMATCH
        elif rep.budget_exceeded:
            status = EXIT_BUDGET
    report["status"] = {EXIT_OK: "ok", EXIT_MISMATCH: "verification-mismatch", EXIT_BUDGET: "budget-exceeded"}[status]
    report["exit_code"] = status
    if job.telemetry:
        report["telemetry"] = {"wall_time_s": round(time.perf_counter() - t0, 6), "peak_rss_kib": _peak_rss_kib()}
    return status, report


def _failure(report, code, exc, job, t0):
    report["status"] = "error"
    report["error"] = {"type": type(exc).__name__, "message": str(exc)}
    report["exit_code"] = code
    if job.telemetry:
        report["telemetry"] = {"wall_time_s": round(time.perf_counter() - t0, 6), "peak_rss_kib": _peak_rss_kib()}
    return code, report


def _fmt_poly(Q) -> str:
    terms = []
    for i, a in enumerate(Q):
        if a == 0:
            continue
        mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
        if mono and abs(a) == 1:
            coef = "-" if a < 0 else ""
        else:
            coef = str(a)
        terms.append(f"{coef}{mono}")
    return " + ".join(terms).replace("+ -", "- ")


def render_text(report: dict) -> str:
    inp = report["input"]
    lines = [
        f"hypzeta {report['version']}",
        f"field        F_{inp['q']}" + (f" = F_{inp['p']}[t]/({inp['modulus']})  (n = {inp['n']})" if inp["n"] > 1 else ""),
        f"curve        y^2 = P(x), P = {inp['P']}  (genus {inp['genus']})",
        f"basis        {inp['basis']}    threads {inp['threads']}",
    ]
    if "P_lift" in inp:
        lines.append(f"P lift       {inp['P_lift']}")
    if "plan" in report:
        pl = report["plan"]
        lines.append(
            f"precision    N = {pl['N']}, guard = {pl['guard']}, Nw = {pl['Nw']}, K = {pl['K']}"
            f" (denominator digits {pl['denominator_digits']})"
        )
        gc = report["guard_consumed"]
        if gc:
            lines.append(
                f"guard used   division shift {gc.get('division_shift')}, max single loss"
                f" {gc.get('max_division_loss')}, denominator exponent {gc.get('denominator_exponent')}"
            )
        if report.get("det_mod_pN") is not None:
            lines.append(f"det(M)       {report['det_mod_pN']} mod {inp['p']}^{pl['N']}")
        lines.append(f"Q(t)         {_fmt_poly(report['Q'])}")
        lines.append(f"coefficients {report['Q']}")
        lines.append(f"group order  {report['group_order']}")
        lines.append("m   #X(F_q^m)")
        lines.extend(f"{m:<3} {c}" for m, c in report["counts"].items())
    if "verification" in report:
        lines.append("verification")
        lines.append("m   predicted   counted   status")
        for e in report["verification"]:
            counted = "-" if e["counted"] is None else e["counted"]
            lines.append(f"{e['m']:<3} {e['predicted']:<11} {counted!s:<9} {e['status']}")
    if "error" in report:
        lines.append(f"error        {report['error']['type']}: {report['error']['message']}")
    lines.append(f"status       {report['status']} (exit {report['exit_code']})")
    if "telemetry" in report:
        t = report["telemetry"]
        lines.append(f"telemetry    wall {t['wall_time_s']:.3f} s, peak RSS {t['peak_rss_kib']} KiB")
    return "\n".join(lines)


def _dump(value, indent: int = 0) -> str:
    """JSON with one key per line and lists of scalars kept on one line."""
    pad = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        body = ",\n".join(f"{pad}{json.dumps(k)}: {_dump(v, indent + 1)}" for k, v in value.items())
        return "{\n" + body + "\n" + "  " * indent + "}"
    if isinstance(value, list) and any(isinstance(v, dict) for v in value):
        body = ",\n".join(pad + _dump(v, indent + 1) for v in value)
        return "[\n" + body + "\n" + "  " * indent + "]"
    return json.dumps(value, separators=(", ", ": "))


def render(report: dict, fmt: str) -> str:
    if fmt == "json-like":
        return _dump(report)
    return render_text(report)


def main(argv=None) -> int:
    try:
        job, spec = parse_input(argv)
    except (HypZetaError, ValueError) as exc:
        print(f"hypzeta: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    code, report = run(job, spec)
    print(render(report, job.format))
    if code != EXIT_OK and "error" in report:
        print(f"hypzeta: {report['error']['type']}: {report['error']['message']}", file=sys.stderr)
    return code


def entry_point():  # pragma: no cover - console script wrapper
    sys.exit(main())


__all__ = ["JobConfig", "main", "parse_input", "render", "run"]
