"""Plain-text certificate files.

::

    # comment
    problem ordered_search 4        (or: problem hash <content hash>)
    0 1 1                           x_index y_index weight
    0 1 3 1/2                       x_index y_index query_index primed weight

Duality certificates use section markers instead: a ``distribution`` line
followed by ``query_index mass`` lines, then a ``weight`` line followed by
pair lines. A trailing ``L=... DL=... PL=... gap=...`` summary is ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .adversary import WeightFunction, WeightScheme
from .blackbox import Problem

_RATIONAL = re.compile(r"-?\d+(?:/\d+)?\Z")


class CertificateParseError(ValueError):
    pass


def parse_rational(token: str) -> Fraction:
    if not _RATIONAL.match(token):
        raise CertificateParseError(f"not an exact fraction: {token!r}")
    try:
        return Fraction(token)
    except ZeroDivisionError:
        raise CertificateParseError(f"zero denominator in {token!r}") from None


def _index(token: str) -> int:
    if not token.isdigit():
        raise CertificateParseError(f"not an index: {token!r}")
    return int(token)


@dataclass
class Certificate:
    header: tuple[str, ...] = ()
    weights: dict[tuple[int, int], Fraction] = field(default_factory=dict)
    primed: dict[tuple[int, int, int], Fraction] = field(default_factory=dict)
    distribution: dict[int, Fraction] = field(default_factory=dict)

    @property
    def is_scheme(self) -> bool:
        return bool(self.primed)

    @property
    def is_duality(self) -> bool:
        return bool(self.distribution)

    def weight_function(self, problem: Problem) -> WeightFunction:
        return WeightFunction(problem, self.weights)

    def weight_scheme(self, problem: Problem) -> WeightScheme:
        return WeightScheme(self.weight_function(problem), self.primed)

    def problem_ref(self) -> tuple[str, str] | None:
        """``("family", "<name> <size>")`` or ``("hash", <hex>)`` if given."""
        if len(self.header) == 2 and self.header[0] == "hash":
            return "hash", self.header[1]
        if len(self.header) == 2:
            return "family", f"{self.header[0]} {self.header[1]}"
        return None


def parse_certificate(text: str) -> Certificate:
    cert = Certificate()
    section = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if tokens[0] == "problem":
                cert.header = tuple(tokens[1:])
            elif tokens[0] in ("distribution", "weight") and len(tokens) == 1:
                section = tokens[0]
            elif tokens[0].startswith("L="):
                continue
            elif section == "distribution":
                if len(tokens) != 2:
                    raise CertificateParseError("expected 'query_index mass'")
                cert.distribution[_index(tokens[0])] = parse_rational(tokens[1])
            elif len(tokens) == 3:
                pair = (_index(tokens[0]), _index(tokens[1]))
                if pair in cert.weights or pair[::-1] in cert.weights:
                    raise CertificateParseError(f"pair {pair} listed twice")
                cert.weights[pair] = parse_rational(tokens[2])
            elif len(tokens) == 4:
                key = (_index(tokens[0]), _index(tokens[1]), _index(tokens[2]))
                cert.primed[key] = parse_rational(tokens[3])
            else:
                raise CertificateParseError(f"cannot read {len(tokens)} fields")
        except CertificateParseError as exc:
            raise CertificateParseError(f"line {lineno}: {exc}") from None
    return cert


def read_certificate(path) -> Certificate:
    with open(path) as fh:
        return parse_certificate(fh.read())


def problem_header(problem: Problem) -> str:
    parts = problem.name.split()
    if len(parts) == 2 and parts[1].isdigit():
        return f"problem {parts[0]} {parts[1]}"
    return f"problem hash {problem.content_hash()}"


def format_certificate(cert: WeightFunction | WeightScheme) -> str:
    w = cert.base if isinstance(cert, WeightScheme) else cert
    lines = [problem_header(w.problem)]
    lines += [f"{a} {b} {v}" for (a, b), v in w.entries.items()]
    if isinstance(cert, WeightScheme):
        lines += [f"{x} {y} {i} {v}" for (x, y, i), v in cert.primed.items()]
    return "\n".join(lines) + "\n"


def write_certificate(cert: WeightFunction | WeightScheme, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_certificate(cert))
