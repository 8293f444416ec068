""" JSON series files, CSV growth tables and the polynomial Q format.
"""
import csv
import json
import logging

import mpmath

from bohrstrip.errors import InvalidInputError, ParseError
from bohrstrip.multiindex import MultiIndex
from bohrstrip.series import Side, SparseSeries
from bohrstrip.util import canonical_json

log = logging.getLogger(__name__)

GROWTH_CSV_HEADER = ("N_log10", "sigma", "A_N")


def series_to_dict(D):
    terms = sorted(D.items(), key=lambda item: tuple(item[0]))
    return {
        "side": D.side.value,
        "terms": [{"alpha": alpha.to_list(), "re": coef.real, "im": coef.imag} for alpha, coef in terms],
    }


def _parse_alpha(raw):
    if not isinstance(raw, list):
        raise ParseError(f"alpha must be a list of [position, exponent] pairs, got {raw!r}")
    pairs = []
    for entry in raw:
        if not isinstance(entry, list) or len(entry) != 2 or not all(isinstance(x, int) and not isinstance(x, bool) for x in entry):
            raise ParseError(f"alpha entries are [position, exponent] integer pairs, got {entry!r}")
        pairs.append(tuple(entry))
    if any(a[0] >= b[0] for a, b in zip(pairs, pairs[1:])):
        raise ParseError(f"alpha must be sorted by position without repeats, got {raw!r}")
    if any(exp < 1 for _, exp in pairs):
        raise ParseError(f"alpha exponents must be positive, got {raw!r}")
    try:
        return MultiIndex(pairs)
    except InvalidInputError as exc:
        raise ParseError(str(exc))


def series_from_dict(data):
    if not isinstance(data, dict) or "terms" not in data:
        raise ParseError("A series file is an object with 'side' and 'terms'")
    try:
        side = Side(data.get("side", Side.dirichlet.value))
    except ValueError:
        raise ParseError(f"Unknown side {data.get('side')!r}")
    terms = {}
    for term in data["terms"]:
        if not isinstance(term, dict) or "alpha" not in term:
            raise ParseError(f"Series terms are objects with 'alpha', 're' and 'im', got {term!r}")
        alpha = _parse_alpha(term["alpha"])
        if alpha in terms:
            raise ParseError(f"Duplicate alpha {term['alpha']!r}")
        try:
            terms[alpha] = complex(float(term.get("re", 0.0)), float(term.get("im", 0.0)))
        except (TypeError, ValueError):
            raise ParseError(f"Coefficients are real numbers, got {term!r}")
    return SparseSeries(terms, side=side)


def write_series(path, D):
    with open(path, "w") as fh:
        fh.write(canonical_json(series_to_dict(D)))
        fh.write("\n")
    log.debug("Wrote %r to %s", D, path)


def read_series(path):
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"Failed to parse series file {path}: {exc}")
    return series_from_dict(data)


def growth_rows(profile, sigma):
    """(log10 N, sigma, A_N) rows from an ``abs_sum_profile``."""
    ns, sums = profile
    rows = []
    with mpmath.workdps(30):
        for n, a in zip(ns, sums):
            rows.append((float(mpmath.log10(n)), sigma, float(a)))
    return rows


def write_growth_csv(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(GROWTH_CSV_HEADER)
        for n_log10, sigma, a in rows:
            writer.writerow((repr(float(n_log10)), repr(float(sigma)), repr(float(a))))


def read_growth_csv(path):
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if tuple(header or ()) != GROWTH_CSV_HEADER:
            raise ParseError(f"Growth tables start with the header {','.join(GROWTH_CSV_HEADER)}")
        return [tuple(float(x) for x in row) for row in reader]


def polynomial_from_terms(terms):
    """``[{exponents, re, im}, ...]`` -> ``{exponents tuple: coefficient}`` with like terms combined.

    All exponent vectors are padded to the same number of variables.
    """
    poly = {}
    width = 0
    parsed = []
    for term in terms:
        if hasattr(term, "dict"):
            term = term.dict()
        try:
            exps = tuple(int(e) for e in term["exponents"])
            coef = complex(float(term.get("re", 0.0)), float(term.get("im", 0.0)))
        except (KeyError, TypeError, ValueError):
            raise ParseError(f"Polynomial terms are objects with 'exponents', 're' and 'im', got {term!r}")
        if any(e < 0 for e in exps):
            raise ParseError(f"Exponents must be nonnegative, got {list(exps)}")
        width = max(width, len(exps))
        parsed.append((exps, coef))
    for exps, coef in parsed:
        exps = exps + (0,) * (width - len(exps))
        poly[exps] = poly.get(exps, 0j) + coef
    return {e: c for e, c in poly.items() if c != 0}


def polynomial_to_terms(poly):
    return [{"exponents": list(e), "re": c.real, "im": c.imag} for e, c in sorted(poly.items())]
