"""Command-line front end.

Exit codes: 0 success, 1 invalid certificate (``certify``), 2 unreadable or
invalid input files and missing inputs, 3 cap violations.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from . import adversary as adv
from . import minimax as mm
from .applications import adjacent_threshold_weight, edge_symmetry, star_weight, \
    two_swap_weight
from .blackbox import (GAMMA_CAP, INPUT_CAP, NAMED_RELATIONS, PAIR_CAP, CapError,
                       PairRelation, Problem, generate, hamming_relation, load_problem,
                       normalize_family)
from .certfile import CertificateParseError, read_certificate

METHODS = ("unweighted", "direct", "weighted", "probabilistic", "minimax", "adaptive-minimax")
NEEDS_CERTIFICATE = ("direct", "weighted", "probabilistic")
CSV_COLUMNS = ("problem", "size", "method", "value_num", "value_den", "is_squared",
               "epsilon", "prefactor", "bound_float")


class UsageError(Exception):
    """Bad or missing input; maps to exit code 2."""


def fmt_float(v: float) -> str:
    """Four significant digits, always with a decimal point."""
    s = f"{v:.4g}"
    if s.lstrip("-").replace(".", "").isdigit() and "." not in s:
        s += ".0"
    return s


def parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


# ---------------------------------------------------------------------------
# rows


@dataclass(frozen=True)
class Row:
    problem: str
    size: str
    report: adv.BoundReport

    @property
    def method(self) -> str:
        return self.report.kind

    def prefactor_label(self) -> str:
        return {0: "prefactor", 1: "C_eps", 2: "C_eps^2"}[self.report.prefactor_power]

    def text(self) -> str:
        r = self.report
        value = f"sqrt({r.value})" if r.is_squared else str(r.value)
        return (f"{r.kind} {value} {fmt_float(r.value_float)} "
                f"{self.prefactor_label()}={fmt_float(r.prefactor)} bound={fmt_float(r.bound)}")

    def csv(self) -> list[str]:
        r = self.report
        return [self.problem, self.size, r.kind, str(r.value.numerator),
                str(r.value.denominator), str(int(r.is_squared)), str(r.epsilon),
                fmt_float(r.prefactor), fmt_float(r.bound)]


def emit(rows: Sequence[Row], fmt: str, out) -> None:
    if fmt == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow(row.csv())
    else:
        out.write("# exact values as fractions; floats are approximate (4 significant digits)\n")
        for row in rows:
            out.write(row.text() + "\n")


# ---------------------------------------------------------------------------
# inputs


def add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", help="problem family, e.g. ordered-search")
    p.add_argument("--size", type=int, help="family size parameter")
    p.add_argument("--problem", type=Path, help="problem file (JSON)")
    p.add_argument("--gamma-cap", type=int, default=GAMMA_CAP)
    p.add_argument("--input-cap", type=int, default=INPUT_CAP)
    p.add_argument("--pairs-cap", type=int, default=PAIR_CAP)


def load_source(args) -> tuple[Problem, str, str]:
    caps = {"gamma_cap": args.gamma_cap, "input_cap": args.input_cap}
    if args.problem is not None:
        try:
            problem = load_problem(args.problem, **caps)
        except CapError:
            raise
        except (OSError, ValueError, TypeError, KeyError) as exc:
            raise UsageError(f"cannot read problem file {args.problem}: {exc}") from None
        parts = problem.name.split()
        if len(parts) == 2:
            return problem, parts[0], parts[1]
        return problem, problem.name or problem.content_hash(), ""
    if args.family is None or args.size is None:
        raise UsageError("give --family and --size, or --problem")
    try:
        family = normalize_family(args.family)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        return generate(family, args.size, **caps), family, str(args.size)
    except CapError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def load_relation(spec: str | None, problem: Problem) -> PairRelation | None:
    if spec is None:
        return None
    if spec in NAMED_RELATIONS:
        try:
            return NAMED_RELATIONS[spec](problem)
        except ValueError as exc:
            raise UsageError(f"relation {spec}: {exc}") from None
    try:
        pairs = []
        for line in Path(spec).read_text().splitlines():
            line = line.split("#", 1)[0].split()
            if line:
                a, b = line
                pairs.append((int(a), int(b)))
        rel = PairRelation.of(pairs)
        rel.check(problem)
        return rel
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read relation {spec!r}: {exc}") from None


def load_profile(path: Path, problem: Problem) -> mm.AdaptiveQueryProfile:
    try:
        data = json.loads(path.read_text())
        rows = [[Fraction(v) for v in row] for row in data["rows"]]
        return mm.AdaptiveQueryProfile(problem, rows)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"cannot read profile {path}: {exc}") from None


def expand_methods(raw: Sequence[str] | None) -> list[str]:
    chosen: set[str] = set()
    for item in raw or ():
        for m in item.split(","):
            m = m.strip()
            if m not in METHODS:
                raise UsageError(f"unknown method {m!r}; expected one of {', '.join(METHODS)}")
            chosen.add(m)
    if not chosen:
        raise UsageError("select at least one --method")
    return [m for m in METHODS if m in chosen]


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args) -> int:
    problem, _, _ = load_source(args)
    text = json.dumps(problem.to_dict()) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def compute_rows(args) -> list[Row]:
    problem, name, size = load_source(args)
    methods = expand_methods(args.method)
    eps = args.epsilon
    adv.c_epsilon(eps)
    relation = load_relation(args.relation, problem)

    cert = None
    missing = [m for m in methods if m in NEEDS_CERTIFICATE]
    if missing:
        if args.certificate is None:
            raise UsageError(f"method {missing[0]} needs --certificate")
        try:
            cert = read_certificate(args.certificate)
        except OSError as exc:
            raise UsageError(f"cannot read certificate: {exc}") from None
        except CertificateParseError as exc:
            raise UsageError(f"bad certificate {args.certificate}: {exc}") from None
        ok, violations = adv.validate_weight_function(cert.weight_function(problem))
        if not ok:
            raise UsageError("certificate is not a valid weight function: " + violations[0])

    reports: list[adv.BoundReport] = []
    try:
        for m in methods:
            if m == "unweighted":
                if relation is None:
                    raise UsageError("method unweighted needs --relation")
                x_class = args.x_class
                if x_class is None:
                    x_class = min(min(problem.outputs[a], problem.outputs[b])
                                  for a, b in relation.pairs)
                reports.append(adv.unweighted_bound(problem, relation, x_class, eps))
            elif m == "direct":
                reports.append(adv.eval_direct_nonadaptive(cert.weight_function(problem), eps))
            elif m == "weighted":
                scheme = (cert.weight_scheme(problem) if cert.is_scheme
                          else adv.scheme_from_function(cert.weight_function(problem)))
                ok, violations = adv.validate_weight_scheme(scheme)
                if not ok:
                    raise UsageError("invalid weight scheme: " + violations[0])
                reports.append(adv.eval_weighted_adversary(scheme, eps))
            elif m == "probabilistic":
                reports.append(adv.eval_probabilistic(cert.weight_function(problem), eps))
            elif m == "minimax":
                rep = mm.verify_duality(problem, relation, pairs_cap=args.pairs_cap)
                reports.extend(rep.reports(eps))
            elif m == "adaptive-minimax":
                if args.profile is not None:
                    profile = load_profile(args.profile, problem)
                else:
                    _, dist = mm.compute_DL(problem, relation, pairs_cap=args.pairs_cap)
                    profile = mm.AdaptiveQueryProfile.constant(dist)
                val = mm.eval_adaptive_minimax(profile, relation)
                if val.unbounded:
                    raise UsageError("profile leaves a differ set without query mass")
                if val.exact is not None:
                    reports.append(adv.BoundReport("adaptive_minimax", val.exact, eps))
                else:
                    reports.append(adv.BoundReport(
                        "adaptive_minimax", Fraction(val.value).limit_denominator(10 ** 12),
                        eps, details={"approximate": True}))
    except adv.NoQualifyingTriple as exc:
        raise UsageError(str(exc)) from None
    return [Row(name, size, r) for r in reports]


def cmd_bounds(args) -> int:
    emit(compute_rows(args), args.format, sys.stdout)
    return 0


def cmd_certify(args) -> int:
    try:
        cert = read_certificate(args.certificate)
    except OSError as exc:
        raise UsageError(f"cannot read certificate: {exc}") from None
    except CertificateParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    if args.problem is None and args.family is None:
        ref = cert.problem_ref()
        if ref is None or ref[0] != "family":
            raise UsageError("certificate names no generated problem; give --family/--size")
        args.family, size = ref[1].split()
        args.size = int(size)
    problem, _, _ = load_source(args)

    n, g = len(problem), problem.gamma_size
    violations = [f"pair ({a}, {b}): index out of range" for a, b in cert.weights
                  if not (0 <= a < n and 0 <= b < n)]
    violations += [f"triple {t}: index out of range" for t in cert.primed
                   if not (0 <= t[0] < n and 0 <= t[1] < n and 0 <= t[2] < g)]
    if not violations:
        if cert.is_duality:
            violations = _check_duality_certificate(cert, problem)
        elif cert.is_scheme:
            violations = adv.validate_weight_scheme(cert.weight_scheme(problem))[1]
        else:
            violations = adv.validate_weight_function(cert.weight_function(problem))[1]
    for v in violations:
        print(v)
    if violations:
        return 1
    print("valid")
    return 0


def _check_duality_certificate(cert, problem: Problem) -> list[str]:
    g = problem.gamma_size
    if any(not 0 <= i < g for i in cert.distribution):
        return ["distribution index out of range"]
    try:
        dist = mm.QueryDistribution(problem, [cert.distribution.get(i, 0) for i in range(g)])
    except ValueError as exc:
        return [f"distribution: {exc}"]
    w = cert.weight_function(problem)
    ok, violations = adv.validate_weight_function(w)
    if not ok:
        return violations
    if not w.entries:
        return ["weight block is empty"]
    dl, pl = mm.eval_DL_given_p(dist), mm.eval_PL_given_w(w)
    if dl != pl:
        return [f"certificates do not meet: DL(p) = {dl}, PL(w) = {pl}"]
    return []


# ---------------------------------------------------------------------------
# regression table


@dataclass(frozen=True)
class TableRow:
    problem: str
    size: int
    quantity: str
    computed: Fraction
    closed_form: Fraction | None
    prefactor_power: int
    epsilon: Fraction

    @property
    def match(self) -> str:
        if self.closed_form is None:
            return "-"
        if self.computed == self.closed_form:
            return "exact"
        return "above" if self.computed > self.closed_form else "MISMATCH"

    @property
    def bound(self) -> float | None:
        if self.prefactor_power == 0:
            return None
        return adv.c_epsilon(self.epsilon).value ** self.prefactor_power * float(self.computed)

    def bound_text(self) -> str:
        return "-" if self.bound is None else fmt_float(self.bound)


def table_rows(epsilon) -> list[TableRow]:
    eps = Fraction(epsilon)
    adv.c_epsilon(eps)
    rows: list[TableRow] = []

    def add(problem, size, quantity, computed, closed, power):
        rows.append(TableRow(problem, size, quantity, computed, closed, power, eps))

    for n in (3, 4, 5, 6):
        p = generate("unordered_search", n)
        rep = mm.verify_duality(p)
        add("unordered_search", n, "DL", rep.DL_value, Fraction(n), 1)
        add("unordered_search", n, "PL", rep.PL_value, Fraction(n), 1)
        add("unordered_search", n, "direct(star)",
            adv.eval_direct_nonadaptive(star_weight(p)).value, Fraction(n), 2)
    for n in (4, 8, 16):
        p = generate("ordered_search", n)
        rep = mm.verify_duality(p)
        add("ordered_search", n, "DL", rep.DL_value, Fraction(n - 1), 1)
        add("ordered_search", n, "PL", rep.PL_value, Fraction(n - 1), 1)
        add("ordered_search", n, "PL(adjacent weight)",
            mm.eval_PL_given_w(adjacent_threshold_weight(p)), Fraction(n - 1), 1)
    for n in (3, 4):
        p = generate("element_distinctness", n)
        rel = hamming_relation(p, 1)
        add("element_distinctness", n, "unweighted(distance1)",
            adv.unweighted_bound(p, rel, 0).value, Fraction(n), 2)
        rep = mm.verify_duality(p)
        add("element_distinctness", n, "DL", rep.DL_value, None, 1)
        add("element_distinctness", n, "PL", rep.PL_value, None, 1)
    n = 6
    p = generate("connectivity", n)
    w = two_swap_weight(p)
    closed = Fraction(n * (n - 1), 8)
    add("connectivity", n, "PL(two-swap weight)", mm.eval_PL_given_w(w), closed, 1)
    sym = edge_symmetry(w)
    rows.append(TableRow("connectivity", n, "edge identity max/total",
                         sym.max_edge, sym.scaled_total, 0, eps))
    rep = mm.verify_duality(p)
    add("connectivity", n, "DL", rep.DL_value, closed, 1)
    add("connectivity", n, "PL", rep.PL_value, closed, 1)
    return rows


def cmd_table(args) -> int:
    rows = table_rows(args.epsilon)
    out = sys.stdout
    if args.format == "csv":
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["problem", "size", "quantity", "computed", "closed_form", "match",
                         "bound_float"])
        for r in rows:
            writer.writerow([r.problem, r.size, r.quantity, str(r.computed),
                             "" if r.closed_form is None else str(r.closed_form), r.match,
                             r.bound_text()])
    else:
        out.write(f"# epsilon={args.epsilon}; bound floats are approximate\n")
        out.write(f"{'problem':<22}{'size':>5}  {'quantity':<26}{'computed':>10}"
                  f"{'closed':>10}  {'match':<9}{'bound':>9}\n")
        for r in rows:
            closed = "-" if r.closed_form is None else str(r.closed_form)
            out.write(f"{r.problem:<22}{r.size:>5}  {r.quantity:<26}{str(r.computed):>10}"
                      f"{closed:>10}  {r.match:<9}{r.bound_text():>9}\n")
    return 1 if any(r.match == "MISMATCH" for r in rows) else 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nabounds",
        description="Exact adversary and minimax lower bounds for nonadaptive quantum query "
                    "complexity.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a problem file")
    add_problem_args(g)
    g.add_argument("-o", "--output", help="output path (default: stdout)")
    g.set_defaults(func=cmd_generate)

    b = sub.add_parser("bounds", help="evaluate lower bounds")
    add_problem_args(b)
    b.add_argument("--method", action="append",
                   help=f"one or more of {', '.join(METHODS)} (repeat or comma-separate)")
    b.add_argument("--epsilon", type=parse_fraction, default=Fraction(1, 3))
    b.add_argument("--certificate", type=Path, help="weight function or scheme file")
    b.add_argument("--relation", help=f"relation name ({', '.join(NAMED_RELATIONS)}) or file")
    b.add_argument("--x-class", type=int, help="output label of the X side (unweighted)")
    b.add_argument("--profile", type=Path, help="adaptive query profile (JSON)")
    b.add_argument("--format", choices=("text", "csv"), default="text")
    b.set_defaults(func=cmd_bounds)

    c = sub.add_parser("certify", help="check a certificate file")
    add_problem_args(c)
    c.add_argument("certificate", type=Path)
    c.set_defaults(func=cmd_certify)

    t = sub.add_parser("table", help="regression table over the standard families")
    t.add_argument("--epsilon", type=parse_fraction, default=Fraction(1, 3))
    t.add_argument("--format", choices=("text", "csv"), default="text")
    t.set_defaults(func=cmd_table)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CapError as exc:
        print(f"cap exceeded: {exc}", file=sys.stderr)
        return 3
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
