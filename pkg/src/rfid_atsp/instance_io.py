"""Random instance generation and the TSPLIB ATSP (EXPLICIT / FULL_MATRIX) file format."""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Optional

from .core import Instance, RandomSource, ValidationError, round_half_away, validate_instance

COORD_DECIMALS = 6


@dataclass(frozen=True)
class GeneratorConfig:
    n: int
    seed: int = 0
    coord_box: float = 1000.0
    asymmetry_alpha: float = 0.3

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"city count must be >= 1, got {self.n}")
        if not 0.0 <= self.asymmetry_alpha <= 1.0:
            raise ValidationError(f"asymmetry_alpha must lie in [0, 1], got {self.asymmetry_alpha}")
        if self.coord_box <= 0:
            raise ValidationError("coord_box must be positive")


def costs_from_coords(coords, asymmetry_alpha: float, rng) -> list[list[int]]:
    """Perturbed, rounded Euclidean arc costs.

    ``costs[i][j] = round(dist(i, j) * (1 + eps_ij))`` with ``eps_ij`` uniform in
    ``[0, asymmetry_alpha]``, one draw per ordered pair in row-major order. No
    draws are made when ``asymmetry_alpha`` is zero.
    """
    n = len(coords)
    costs = [[0] * n for _ in range(n)]
    for i in range(n):
        xi, yi = coords[i]
        for j in range(n):
            if i == j:
                continue
            eps = rng.uniform(0.0, asymmetry_alpha) if asymmetry_alpha > 0 else 0.0
            xj, yj = coords[j]
            costs[i][j] = round_half_away(math.hypot(xi - xj, yi - yj) * (1.0 + eps))
    return costs


def generate_instance(config: GeneratorConfig, source: Optional[RandomSource] = None) -> Instance:
    """Cities uniform in ``[0, coord_box]^2`` with asymmetrically perturbed costs.

    Coordinates are quantized to six decimals so that the written file
    reproduces the instance exactly.
    """
    rng = source if source is not None else RandomSource(config.seed)
    coords = []
    for _ in range(config.n):
        x = round(rng.uniform(0.0, config.coord_box), COORD_DECIMALS)
        y = round(rng.uniform(0.0, config.coord_box), COORD_DECIMALS)
        coords.append((x, y))
    costs = costs_from_coords(coords, config.asymmetry_alpha, rng)
    return Instance.build(f"rand{config.n}_s{config.seed}", costs, coords)


def format_instance(instance: Instance) -> str:
    n = instance.n
    lines = [
        f"NAME: {instance.name}",
        "TYPE: ATSP",
        f"DIMENSION: {n}",
        "EDGE_WEIGHT_TYPE: EXPLICIT",
        "EDGE_WEIGHT_FORMAT: FULL_MATRIX",
        "EDGE_WEIGHT_SECTION",
    ]
    lines.extend(" ".join(str(c) for c in row) for row in instance.costs)
    if instance.coords is not None:
        lines.append("NODE_COORD_SECTION")
        for i, (x, y) in enumerate(instance.coords, start=1):
            lines.append(f"{i} {x:.{COORD_DECIMALS}f} {y:.{COORD_DECIMALS}f}")
    if instance.depot != 0:
        lines.extend(["DEPOT_SECTION", str(instance.depot + 1), "-1"])
    lines.append("EOF")
    return "\n".join(lines) + "\n"


def write_instance(instance: Instance, destination=None) -> str:
    """Serialize ``instance``; also write it to ``destination`` when a path is given."""
    problems = validate_instance(instance)
    if problems:
        raise ValidationError("invalid instance: " + "; ".join(problems))
    text = format_instance(instance)
    if destination is not None:
        try:
            with open(destination, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write instance to {os.fspath(destination)}: {exc}") from exc
    return text


def read_instance(path) -> Instance:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise OSError(f"cannot read instance from {os.fspath(path)}: {exc}") from exc
    return parse_instance(text)


_SECTIONS = ("EDGE_WEIGHT_SECTION", "NODE_COORD_SECTION", "DEPOT_SECTION", "EOF")


def parse_instance(text: str) -> Instance:
    lines = text.splitlines()
    header = {}
    name = "unnamed"
    costs = None
    coords = None
    depot = 0
    i = 0
    while i < len(lines):
        line = lines[i].strip()
        lineno = i + 1
        i += 1
        if not line:
            continue
        keyword = line.split(":")[0].strip().upper()
        if keyword == "EOF":
            break
        if keyword == "EDGE_WEIGHT_SECTION":
            n = _dimension(header)
            costs, i = _read_matrix(lines, i, n, lineno)
            continue
        if keyword == "NODE_COORD_SECTION":
            n = _dimension(header)
            coords, i = _read_coords(lines, i, n)
            continue
        if keyword == "DEPOT_SECTION":
            depot, i = _read_depot(lines, i)
            continue
        if ":" not in line:
            raise ValidationError(f"line {lineno}: unrecognized line {line!r}")
        key, value = (part.strip() for part in line.split(":", 1))
        key = key.upper()
        if key == "NAME":
            name = value
        elif key == "TYPE" and value.upper() != "ATSP":
            raise ValidationError(f"line {lineno}: unsupported type {value!r}")
        elif key == "EDGE_WEIGHT_TYPE" and value.upper() != "EXPLICIT":
            raise ValidationError(f"line {lineno}: unsupported edge weight type {value!r}")
        elif key == "EDGE_WEIGHT_FORMAT" and value.upper() != "FULL_MATRIX":
            raise ValidationError(f"line {lineno}: unsupported edge weight format {value!r}")
        header[key] = value
    if "TYPE" not in header:
        raise ValidationError("missing TYPE")
    if costs is None:
        raise ValidationError("missing EDGE_WEIGHT_SECTION")
    return Instance.build(name, costs, coords, depot)


def _dimension(header) -> int:
    try:
        n = int(header["DIMENSION"])
    except (KeyError, ValueError):
        raise ValidationError("DIMENSION must precede data sections") from None
    if n < 1:
        raise ValidationError(f"DIMENSION must be >= 1, got {n}")
    return n


def _read_matrix(lines, i, n, section_line):
    # FULL_MATRIX entries may wrap across lines arbitrarily; read n*n tokens.
    values = []
    while len(values) < n * n:
        if i >= len(lines):
            raise ValidationError(
                f"matrix shape error at line {i + 1}: expected {n * n} entries for DIMENSION {n}, "
                f"found {len(values)} before end of file"
            )
        line = lines[i]
        for tok in line.split():
            try:
                values.append(int(tok))
            except ValueError:
                raise ValidationError(
                    f"matrix shape error at line {i + 1}: expected {n * n} entries for DIMENSION {n} "
                    f"(section starts line {section_line}), found {len(values)} before {tok!r}"
                ) from None
        i += 1
    if len(values) != n * n:
        raise ValidationError(
            f"matrix shape error at line {i}: expected {n * n} entries for DIMENSION {n}, found {len(values)}"
        )
    return [values[r * n:(r + 1) * n] for r in range(n)], i


def _read_coords(lines, i, n):
    coords = [None] * n
    for _ in range(n):
        while i < len(lines) and not lines[i].strip():
            i += 1
        if i >= len(lines):
            raise ValidationError(f"line {i + 1}: NODE_COORD_SECTION ends early")
        parts = lines[i].split()
        try:
            idx, x, y = int(parts[0]), float(parts[1]), float(parts[2])
        except (ValueError, IndexError):
            raise ValidationError(f"line {i + 1}: malformed coordinate line {lines[i]!r}") from None
        if len(parts) != 3 or not 1 <= idx <= n or coords[idx - 1] is not None:
            raise ValidationError(f"line {i + 1}: bad coordinate entry {lines[i]!r}")
        coords[idx - 1] = (x, y)
        i += 1
    return coords, i


def _read_depot(lines, i):
    depots = []
    while i < len(lines):
        tok = lines[i].strip()
        i += 1
        if not tok:
            continue
        if tok == "-1":
            break
        try:
            depots.append(int(tok) - 1)
        except ValueError:
            raise ValidationError(f"line {i}: bad depot entry {tok!r}") from None
    if len(depots) != 1:
        raise ValidationError("DEPOT_SECTION must list exactly one depot")
    return depots[0], i
