"""Deterministic JSON serialization of results."""

import json
from importlib import resources

from .dsl import print_form, print_jet

SCHEMA_VERSION = "1.0"


def rational(c, field=None):
    if field is not None:
        return field.to_str(c)
    num, den = int(c.numerator), int(c.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


def jet(J, names=None):
    terms = [[list(e), J.field.to_str(c)] for e, c in J.terms()]
    out = {"degree": J.degree, "terms": terms}
    if names is not None:
        out["text"] = print_jet(J, names)
    return out


def form(F, names):
    comps = [{"basis": [names[j] for j in Jb], "coeff": jet(c, names)} for Jb, c in F.nonzero_items()]
    return {"grade": F.grade, "degree": F.degree, "components": comps,
            "text": print_form(F, names, header=False)}


def field_(X, names):
    return {"components": [jet(c, names) for c in X]}


def change(ch, names):
    return {"forward": [jet(c, names) for c in ch.forward],
            "inverse": [jet(c, names) for c in ch.inverse],
            "degree": ch.degree}


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_schema():
    text = resources.files("contactnf").joinpath("report.schema.json").read_text()
    return json.loads(text)


def float_str(x):
    return format(float(x), ".17g")
