"""Command line front end: ``contactnf --task classify --expr "..."``."""

import argparse
import sys

from . import report as rp
from .contact import (TANGENT, classify_singularity, full_normalize, kernel_field, prenormalize)
from .dsl import parse_form_with_names
from .errors import ContactNFError, FloatModeRefused, ParseError, PreconditionError
from .exterior import d, interior
from .normalizer import toric_degree
from .primitive import (bruno_check, hyperbolicity, is_linearizable, normalize_primitive,
                        resonance_support)
from .spectrum import SpectralData, parse_constants

TASKS = ("classify", "prenormalize", "normalize", "primitive", "spectrum")
DEFAULTS = {"degree": 8, "mode": "exact", "precision": 106, "depth": 12, "complex": "off",
            "constants": "", "lambda": ""}


def read_config(path):
    """``key = value`` lines; ``#`` starts a comment."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError("expected key = value", lineno, 1)
            k, v = (s.strip() for s in line.split("=", 1))
            if k not in DEFAULTS:
                raise ParseError(f"unknown config key {k!r}", lineno, 1)
            out[k] = v
    return out


def _config(config):
    cfg = dict(DEFAULTS)
    cfg.update({k: v for k, v in (config or {}).items() if v is not None})
    cfg["degree"] = int(cfg["degree"])
    cfg["depth"] = int(cfg["depth"])
    cfg["precision"] = int(cfg["precision"])
    if cfg["mode"] not in ("exact", "float"):
        raise PreconditionError(f"unknown mode {cfg['mode']!r}")
    if cfg["degree"] < 1:
        raise PreconditionError("degree must be positive")
    return cfg


def _base(task, text, cfg):
    return {
        "schema_version": rp.SCHEMA_VERSION,
        "task": task,
        "status": "ok",
        "input": {"text": text, "degree": cfg["degree"], "mode": cfg["mode"]},
        "diagnosis": None,
        "classification": None,
        "normal_form": None,
        "change": None,
        "verification": None,
        "flags": {},
    }


def _diagnosis(diag, names):
    out = {
        "cond_presymplectic": diag.cond_presymplectic,
        "cond_diffeo": diag.cond_diffeo,
        "singular": diag.singular,
        "tangency": diag.tangency,
        "theta_order": diag.theta_order,
    }
    if diag.kernel is not None:
        out["kernel"] = rp.field_(diag.kernel, names)
    if diag.f_theta is not None:
        out["f_theta"] = rp.jet(diag.f_theta, names)
    return out


def _verification(residual, names, degree):
    zero = residual.is_zero()
    return {"round_trip_residual": rp.form(residual, names) if hasattr(residual, "grade")
            else rp.jet(residual, names),
            "residual_is_zero": zero, "verified_degree": degree}


def _primitive_section(rep, names):
    sd = rep.spectral
    blocks = []
    for (g, case), b in zip(rep.gamma_blocks, sd.blocks):
        blocks.append({"lambda": b.lam.to_str(), "start": b.start + 1, "size": b.size,
                       "case": case.tag, "q": None if case.q is None else rp.rational(case.q),
                       "Q": rp.jet(case.Q, names)})
    fl = rep.flags
    return {
        "eigenvalues": sd.as_strings(),
        "blocks": blocks,
        "R_support": [{"alpha": list(e), "coeff": rp.rational(c)} for e, c in rep.R_support],
        "gamma_nf": rp.form(rep.gamma_nf, names),
        "conformal_field": rp.field_(rep.field_nf, names),
        "flags": {
            "linearizable": fl["linearizable"],
            "linearizable_certificate": fl["linearizable_certificate"],
            "hyperbolic": fl["hyperbolic"],
            "bruno_partial_sums": [rp.float_str(x) for x in fl["bruno_partial_sums"]],
            "resonant_support_ok": fl["resonant_support_ok"],
            "q_literal": fl["q_literal"],
        },
    }


def _parse(text, degree, cfg):
    if cfg["mode"] == "float":
        raise FloatModeRefused("float mode is only available for the spectrum task")
    return parse_form_with_names(text, degree, truncate=False)


def _work_degree(cfg, text):
    # the contact pipeline loses a few degrees (and halves in the tangent grading)
    return 2 * cfg["degree"] + 6


def run(task, input, config=None):
    """Run one task on DSL text (or, for ``spectrum``, an empty string) and return the report dict."""
    if task not in TASKS:
        raise PreconditionError(f"unknown task {task!r}; expected one of {', '.join(TASKS)}")
    cfg = _config(config)
    D = cfg["degree"]
    rep = _base(task, input, cfg)
    if task == "spectrum":
        return _run_spectrum(rep, cfg)
    if task == "primitive":
        gamma, names = _parse(input, D + 1, cfg)
        if gamma.grade != 1:
            raise PreconditionError("expected a 1-form")
        pr = normalize_primitive(gamma, D, bruno_depth=cfg["depth"])
        back = pr.change.push_form(pr.gamma_nf)
        deg = min(back.degree, gamma.degree, D + 1)
        res = (back - gamma).truncate(deg)
        rec = pr.reconstruct()
        rep["normal_form"] = _primitive_section(pr, names)
        rep["change"] = rp.change(pr.change.truncate(D + 1), names)
        rep["verification"] = _verification(res, names, deg)
        rep["verification"]["reconstruction_ok"] = rec.equal_mod(pr.gamma_nf, deg)
        rep["flags"] = rep["normal_form"]["flags"]
        return rep
    if task == "classify":
        alpha, names = _parse(input, D, cfg)
        diag = classify_singularity(alpha)
        rep["diagnosis"] = _diagnosis(diag, names)
        rep["classification"] = diag.tangency
        Z = kernel_field(alpha)
        res = interior(Z, d(alpha))
        rep["verification"] = _verification(res.truncate(res.degree), names, res.degree)
        return rep
    alpha, names = _parse(input, _work_degree(cfg, input), cfg)
    nf = prenormalize(alpha) if task == "prenormalize" else full_normalize(alpha, None, cfg["depth"])
    ok, deg = nf.round_trip_ok()
    res = nf.residual().truncate(deg)
    out_deg = min(deg, (2 * D + 1) if nf.case == TANGENT else D + 1)
    rep["diagnosis"] = _diagnosis(nf.diagnosis, names)
    rep["classification"] = nf.case
    section = {
        "case": nf.case,
        "sign": nf.sign,
        "grading": list(nf.ring_weights),
        "theta_part": rp.form(nf.theta_part.truncate(out_deg), names),
        "gamma": rp.form(nf.gamma.truncate(max(1, out_deg // (2 if nf.case == TANGENT else 1))),
                         names[1:]),
    }
    if nf.primitive is not None:
        section["primitive"] = _primitive_section(nf.primitive, names[1:])
        rep["flags"] = dict(section["primitive"]["flags"])
    if nf.phi is not None:
        section["phi"] = rp.jet(nf.phi, names[1:])
        section["phi_witness"] = None if nf.witness is None else rp.jet(nf.witness, names[1:])
        rep["flags"]["phi_linearizable_with_gamma"] = nf.flags.get("phi_linearizable_with_gamma")
    rep["normal_form"] = section
    rep["change"] = rp.change(nf.change.truncate(out_deg), names)
    rep["verification"] = _verification(res, names, deg)
    return rep


def _run_spectrum(rep, cfg):
    consts = parse_constants(cfg["constants"]) if cfg["constants"] else ()
    vals = [v.strip() for v in str(cfg["lambda"]).split(",") if v.strip()]
    if not vals:
        raise PreconditionError("spectrum task needs --lambda")
    sd = SpectralData.from_values(vals, consts)
    D = cfg["degree"]
    res = resonance_support(sd, D)
    verdict = is_linearizable(sd, D)
    rep["spectrum"] = {
        "eigenvalues": sd.as_strings(),
        "paired": sd.pairing is not None,
        "toric_degree": toric_degree(sd),
        "resonances": [list(a) for a in res],
    }
    rep["flags"] = {
        "linearizable": verdict.value,
        "linearizable_certificate": verdict.certificate,
        "hyperbolic": hyperbolicity(sd),
        "bruno_partial_sums": [rp.float_str(x) for x in bruno_check(sd, cfg["depth"])],
    }
    return rep


def _error_report(task, text, exc):
    return {"schema_version": rp.SCHEMA_VERSION, "task": task, "status": "error",
            "input": {"text": text},
            "error": {"code": exc.code, "message": str(exc), "exit_status": exc.exit_status}}


def build_parser():
    p = argparse.ArgumentParser(prog="contactnf", description="Normal forms of singular contact "
                                "1-forms and primitive 1-forms.")
    src = p.add_mutually_exclusive_group()
    src.add_argument("--input", help="DSL file")
    src.add_argument("--expr", help="DSL expression")
    p.add_argument("--task", choices=TASKS, default="classify")
    p.add_argument("--degree", type=int, help="jet degree D (default 8)")
    p.add_argument("--mode", choices=("exact", "float"))
    p.add_argument("--out", help="output file (default stdout)")
    p.add_argument("--constants", help='declared constants, e.g. "s=1.41421356:sqrt2"')
    p.add_argument("--lambda", dest="lam", help="eigenvalues for the spectrum task, e.g. 2,-1")
    p.add_argument("--depth", type=int, help="Bruno depth K (default 12)")
    p.add_argument("--config", help="key = value config file")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    text = ""
    try:
        cfg = read_config(args.config) if args.config else {}
        for key, val in (("degree", args.degree), ("mode", args.mode), ("depth", args.depth),
                         ("constants", args.constants), ("lambda", args.lam)):
            if val is not None:
                cfg[key] = val
        if args.input:
            with open(args.input, encoding="utf-8") as fh:
                text = fh.read()
        elif args.expr is not None:
            text = args.expr
        elif args.task != "spectrum":
            raise PreconditionError("give --input or --expr")
        report = run(args.task, text, cfg)
        status = 0
    except ContactNFError as exc:
        report = _error_report(args.task, text, exc)
        status = exc.exit_status
        print(f"contactnf: {exc.code}: {exc}", file=sys.stderr)
    out = rp.dumps(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)
    return status


if __name__ == "__main__":
    sys.exit(main())
