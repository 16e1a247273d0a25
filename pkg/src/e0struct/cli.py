"""Command-line front end: classify curves, normalize models, print
formal-group data, verify points, and run oracle comparisons.

Exit codes: 0 = success/certified, 2 = exploratory result, 1 = error.
JSON output is deterministic (sorted keys)."""

from __future__ import annotations

import json
import sys
from fractions import Fraction

import click
import jsonschema

from .classifier import classify_general
from .curve import (INFINITY, WeierstrassCurve, normalize_additive,
                    psi_E0, reduce_point, reduction_type, filtration_level)
from .formal_group import (eval_at, generic_group_law, generic_mult_by_n,
                           specialized_mult_by_n)
from .local_field import LocalField
from .oracle import compare

EXIT_OK, EXIT_ERROR, EXIT_EXPLORATORY = 0, 1, 2
SYMBOLIC_DEGREE_BOUND = 24

_RATIONAL = {"anyOf": [{"type": "integer"},
                       {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}]}
_COEFF = {"anyOf": [_RATIONAL,
                    {"type": "array", "items": _RATIONAL, "minItems": 1}]}
_POINT = {"anyOf": [{"const": "infinity"},
                    {"type": "object",
                     "properties": {"x": _COEFF, "y": _COEFF},
                     "required": ["x", "y"],
                     "additionalProperties": False}]}

DESCRIPTOR_SCHEMA = {
    "type": "object",
    "properties": {
        "p": {"type": "integer", "minimum": 2},
        "field": {
            "type": "object",
            "properties": {
                "kind": {"enum": ["unramified", "eisenstein"]},
                "n": {"type": "integer", "minimum": 1},
                "poly": {"type": "array", "items": {"type": "integer"},
                         "minItems": 2},
            },
            "required": ["kind"],
            "additionalProperties": False,
        },
        "a": {"type": "array", "items": _COEFF,
              "minItems": 5, "maxItems": 5},
        "precision": {"type": "integer", "minimum": 1},
        "points": {"type": "array", "items": _POINT},
    },
    "required": ["p", "field", "a"],
    "additionalProperties": False,
}


class DescriptorError(ValueError):
    pass


def _parse_rational(v) -> Fraction:
    if isinstance(v, int):
        return Fraction(v)
    return Fraction(v)


def load_descriptor(text: str) -> dict:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DescriptorError(f"invalid JSON: {exc}") from exc
    try:
        jsonschema.validate(data, DESCRIPTOR_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise DescriptorError(f"descriptor schema: {exc.message}") from exc
    return data


def build_field(desc: dict, precision=None) -> LocalField:
    p = desc["p"]
    f = desc["field"]
    M = precision if precision is not None else desc.get("precision")
    if f["kind"] == "unramified":
        return LocalField.unramified(p, f.get("n", 1), M)
    if "poly" not in f:
        raise DescriptorError("eisenstein field needs a 'poly'")
    return LocalField.eisenstein(p, f["poly"], M)


def _embed_coeff(field: LocalField, v):
    """A descriptor coefficient (rational or coefficient vector) as an
    element of O_K."""
    if isinstance(v, list):
        coeffs = [_parse_rational(c) for c in v]
        acc = field.zero().as_k()
        pw = field.one().as_k()
        pi = field.uniformizer.as_k() if field.kind == "eisenstein" else None
        if field.kind == "unramified":
            ints = []
            for c in coeffs:
                if c.denominator != 1:
                    raise DescriptorError(
                        f"non-integral coefficient {c} in vector")
                ints.append(c.numerator)
            return field.element(ints)
        for c in coeffs:
            acc = acc + field.embed_rational(c) * pw
            pw = pw * pi
        out = acc.integral_part()
        return out
    q = _parse_rational(v)
    return field.embed_integral_rational(q)


def build_curve(field: LocalField, desc: dict) -> WeierstrassCurve:
    a = [_embed_coeff(field, v) for v in desc["a"]]
    return WeierstrassCurve(field, *a)


def build_point(E: WeierstrassCurve, pt):
    if pt == "infinity":
        return INFINITY
    x = _embed_coeff(E.field, pt["x"]).as_k()
    y = _embed_coeff(E.field, pt["y"]).as_k()
    return E.point(x, y)


def _read_input(path):
    if path == "-" or path is None:
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def _emit(payload, text_lines, as_json):
    if as_json:
        click.echo(json.dumps(payload, sort_keys=True))
    else:
        for line in text_lines:
            click.echo(line)


def _fail(message, as_json=False):
    if as_json:
        click.echo(json.dumps({"error": message}, sort_keys=True))
    else:
        click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_ERROR)


@click.group()
def main():
    """Z_p-module structure of E_0(K) for additive reduction."""


@main.command()
@click.argument("input", default="-")
@click.option("--precision", type=int, default=None,
              help="Working precision (powers of m_K).")
@click.option("--json", "as_json", is_flag=True, help="JSON output only.")
def classify(input, precision, as_json):
    """Classify E_0(K) for the descriptor in INPUT (path or '-')."""
    try:
        desc = load_descriptor(_read_input(input))
        field = build_field(desc, precision)
        E = build_curve(field, desc)
        rt = reduction_type(E)
        if rt.tag != "additive":
            _fail(f"reduction type: {rt.tag} (additive required)", as_json)
        report = classify_general(E)
    except (DescriptorError, ValueError, ArithmeticError) as exc:
        _fail(str(exc), as_json)
    tag = "certified" if report.certified else "exploratory"
    _emit(report.to_json(),
          [f"{report.structure}, method: {report.method}, {tag}"],
          as_json)
    sys.exit(EXIT_OK if report.certified else EXIT_EXPLORATORY)


@main.command()
@click.argument("input", default="-")
@click.option("--precision", type=int, default=None)
@click.option("--json", "as_json", is_flag=True)
def normalize(input, precision, as_json):
    """Translate the singular point to the origin and kill the tangent
    cross term; print the transformed model."""
    try:
        desc = load_descriptor(_read_input(input))
        field = build_field(desc, precision)
        E = build_curve(field, desc)
        E2, tr = normalize_additive(E)
    except (DescriptorError, ValueError, ArithmeticError) as exc:
        _fail(str(exc), as_json)
    payload = {"curve": E2.to_json(), "transform": tr.to_json()}
    avals = [list(ai.coeffs) for ai in E2.a]
    lines = [f"normalized a-invariants (coefficient vectors): {avals}",
             f"transform (r, s, t): {json.dumps(tr.to_json(), sort_keys=True)}"]
    _emit(payload, lines, as_json)


@main.command("formal-group")
@click.option("--p", "p", type=int, default=None,
              help="Also print g = [p](T)/p mod m for p in {2,3,5,7}.")
@click.option("--n-series", type=int, default=2,
              help="Which multiplication series [n] to print.")
@click.option("--degree", type=int, default=6,
              help="Truncation degree for the printed series.")
@click.option("--json", "as_json", is_flag=True)
def formal_group(p, n_series, degree, as_json):
    """Print the generic group law F, the series [n], and g."""
    if degree > SYMBOLIC_DEGREE_BOUND:
        _fail(f"degree {degree} exceeds symbolic bound "
              f"{SYMBOLIC_DEGREE_BOUND}", as_json)
    if n_series < 1:
        _fail("--n-series must be >= 1", as_json)
    F = generic_group_law(min(degree, 6))
    mn = generic_mult_by_n(n_series, degree)
    payload = {"F": F.pretty(("X", "Y")),
               "mult": {"n": n_series, "series": mn.pretty(("T",))}}
    lines = [f"F(X, Y) = {payload['F']} + O(deg {min(degree, 6) + 1})",
             f"[{n_series}](T) = {payload['mult']['series']}"
             f" + O(T^{degree + 1})"]
    if p is not None:
        if p in (2, 3, 5, 7):
            gl = _generic_g_line(p)
            payload["g"] = gl
            lines.append(f"g = {gl}")
        else:
            payload["g"] = "T"
            lines.append("g = T (no torsion contribution for p > 7)")
    _emit(payload, lines, as_json)


def _generic_g_line(p: int) -> str:
    """g = [p](T)/p mod m as a string, e.g. 'T - (3*a4/5)~ * T^5'."""
    mp = generic_mult_by_n(p, 8)
    names = {1: "a1", 2: "a2", 3: "a3", 4: "a4", 6: "a6"}
    out = "T"
    i = p
    while i <= 8:
        c = mp.c.get((i,))
        if c is not None:
            for exps, b in sorted(c.items()):
                if sum(exps) != 1:
                    continue  # >= 2 a-factors vanish mod m after /p
                w = (1, 2, 3, 4, 6)[exps.index(1)]
                r = (-b) % p
                if r:
                    head = f"{r}*" if r != 1 else ""
                    out += f" - ({head}{names[w]}/{p})~ * T^{i}"
        i *= p
    return out


@main.command("verify-point")
@click.argument("input", default="-")
@click.option("--precision", type=int, default=4,
              help="Precision (powers of m_K) for torsion checks.")
@click.option("--json", "as_json", is_flag=True)
def verify_point(input, precision, as_json):
    """Check each descriptor point: on-curve, E_0 membership, filtration
    level, and torsion order."""
    try:
        desc = load_descriptor(_read_input(input))
        field = build_field(desc, None)
        E = build_curve(field, desc)
        if not desc.get("points"):
            _fail("descriptor has no points to verify", as_json)
        report = classify_general(E)
        tr = None
        if not E.is_normalized():
            E, tr = normalize_additive(E)
        results = [_verify_one(E, report, pt, precision, tr)
                   for pt in desc["points"]]
    except (DescriptorError, ValueError, ArithmeticError) as exc:
        _fail(str(exc), as_json)
    _emit({"points": results}, [r["text"] for r in results], as_json)
    sys.exit(EXIT_OK if report.certified else EXIT_EXPLORATORY)


def _verify_one(E, report, raw, precision, tr=None):
    field = E.field
    P = build_point(E, raw)
    if tr is not None:
        P = tr.forward(P)
    out = {"point": raw if raw == "infinity"
           else {"x": str(raw["x"]), "y": str(raw["y"])}}
    if P.is_infinity:
        out.update({"in_E0": True, "order": 1,
                    "text": "infinity: identity"})
        return out
    res = E.equation_residual(P)
    if not E.contains(P):
        v = None if res.is_zero_at_precision() else res.valuation()
        raise ValueError(f"point not on curve: residual valuation "
                         f"{v if v is not None else '>= prec'}")
    _, smooth = reduce_point(E, P)
    if not smooth:
        out.update({"in_E0": False,
                    "text": "not in E_0 (reduces to singular point)"})
        return out
    level = filtration_level(E, P)
    psi = psi_E0(E, P)
    p = field.p
    mp = specialized_mult_by_n(E.a, p, 6 * precision)
    torsion = None
    val = psi
    for j in (1, 2):
        val = eval_at(mp, val, precision)
        if val.is_zero_at_precision():
            torsion = p ** j
            break
    out.update({"in_E0": True, "level": level})
    if torsion is not None:
        out["order"] = torsion
        out["text"] = f"in E_0, level {level}, {torsion}-torsion"
    elif not report.structure.torsion and report.certified:
        out["order"] = "infinite"
        out["text"] = (f"in E_0, level {level}, infinite order "
                       f"(group is {report.structure})")
    else:
        out["order"] = f"not p^j-torsion for j <= 2 (mod m^{precision})"
        out["text"] = f"in E_0, level {level}, {out['order']}"
    return out


@main.command()
@click.argument("input", default="-")
@click.option("-m", "--level", type=int, default=4,
              help="Quotient level M for the finite model.")
@click.option("--precision", type=int, default=None)
@click.option("--json", "as_json", is_flag=True)
def oracle(input, level, precision, as_json):
    """Compare the certified classification against the brute-force
    finite-quotient oracle at level M."""
    try:
        desc = load_descriptor(_read_input(input))
        field = build_field(desc, precision)
        E = build_curve(field, desc)
        report = classify_general(E)
        if not report.certified:
            _fail("oracle comparison requires a certified classification",
                  as_json)
        if report.transform is not None and not report.transform.is_identity:
            E, _ = normalize_additive(E)
        verdict = compare(E, report, level)
    except (DescriptorError, ValueError, ArithmeticError) as exc:
        _fail(str(exc), as_json)
    lines = [f"order {verdict['order']}, p_rank {verdict['p_rank']}, "
             f"kernel {verdict['kernel_size']}: {verdict['verdict']}"]
    _emit(verdict, lines, as_json)
    sys.exit(EXIT_OK if verdict["verdict"] == "pass" else EXIT_ERROR)


if __name__ == "__main__":
    main()
