#!/usr/bin/env python3
"""Solve a `fuelroute export-mip` model with scipy's HiGHS backend.

Independent cross-check for the LP exporter: this parses the emitted
CPLEX-LP dialect (Minimize / Subject To / Bounds / Binary / End, wrapped
rows, `\\` comments) from scratch and hands the matrices to
scipy.optimize.milp. Prints the optimal objective with six decimals, or the
solver status when there is no optimum.

Usage: check_lp.py model.lp
"""

import sys

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp

SECTIONS = ("Minimize", "Subject To", "Bounds", "Binary", "End")


def split_sections(text):
    current = None
    rows = {name: [] for name in SECTIONS}
    for raw in text.splitlines():
        if raw.startswith("\\"):
            continue
        if raw in SECTIONS:
            current = raw
            continue
        if raw.strip():
            rows[current].append(raw)
    return rows


def join_wrapped(lines):
    """Rows wrap onto continuation lines that carry no `name:` label."""
    rows = []
    for line in lines:
        head = line.split(None, 1)[0]
        if head.endswith(":"):
            rows.append(line)
        else:
            rows[-1] += " " + line
    return rows


def is_number(token):
    try:
        float(token)
        return True
    except ValueError:
        return False


def parse_expr(tokens, var_ids):
    """Sum of `[sign] [magnitude] var` terms as a {var index: coef} dict."""
    coefs = {}
    sign, magnitude = 1.0, None
    for token in tokens:
        if token == "+":
            sign, magnitude = 1.0, None
        elif token == "-":
            sign, magnitude = -1.0, None
        elif is_number(token):
            magnitude = float(token)
        else:
            var = var_ids.setdefault(token, len(var_ids))
            coef = sign * (1.0 if magnitude is None else magnitude)
            coefs[var] = coefs.get(var, 0.0) + coef
            sign, magnitude = 1.0, None
    return coefs


def main(path):
    sections = split_sections(open(path).read())
    var_ids = {}

    row = join_wrapped(sections["Minimize"])[0]
    objective = parse_expr(row.split()[1:], var_ids)

    constraints = []  # (coefs, lo, hi)
    for row in join_wrapped(sections["Subject To"]):
        tokens = row.split()[1:]
        for i, token in enumerate(tokens):
            if token in ("<=", ">=", "="):
                rel, rhs = token, float(tokens[i + 1])
                coefs = parse_expr(tokens[:i], var_ids)
                break
        else:
            raise ValueError(f"row without relation: {row}")
        lo = -np.inf if rel == "<=" else rhs
        hi = np.inf if rel == ">=" else rhs
        constraints.append((coefs, lo, hi))

    explicit = {}  # var index -> (lb, ub)
    for line in sections["Bounds"]:
        tokens = line.split()
        if len(tokens) == 3 and tokens[1] == "=":
            var = var_ids.setdefault(tokens[0], len(var_ids))
            explicit[var] = (float(tokens[2]), float(tokens[2]))
        elif len(tokens) == 5 and tokens[1] == tokens[3] == "<=":
            var = var_ids.setdefault(tokens[2], len(var_ids))
            explicit[var] = (float(tokens[0]), float(tokens[4]))
        else:
            raise ValueError(f"unsupported bound: {line}")

    binary = {var_ids.setdefault(line.strip(), len(var_ids)) for line in sections["Binary"]}

    n = len(var_ids)
    c = np.zeros(n)
    for var, coef in objective.items():
        c[var] = coef

    lb, ub = np.zeros(n), np.full(n, np.inf)
    for var, (lo, hi) in explicit.items():
        lb[var], ub[var] = lo, hi
    for var in binary:
        lb[var], ub[var] = 0.0, 1.0
    integrality = np.zeros(n)
    integrality[list(binary)] = 1

    a = np.zeros((len(constraints), n))
    c_lo, c_hi = np.zeros(len(constraints)), np.zeros(len(constraints))
    for k, (coefs, lo, hi) in enumerate(constraints):
        for var, coef in coefs.items():
            a[k, var] = coef
        c_lo[k], c_hi[k] = lo, hi

    result = milp(
        c,
        constraints=LinearConstraint(a, c_lo, c_hi),
        integrality=integrality,
        bounds=Bounds(lb, ub),
    )
    if result.status != 0:
        print(f"status: {result.message}")
        return 1
    print(f"{result.fun:.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main(sys.argv[1]))
