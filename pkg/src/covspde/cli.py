"""Command-line front end: ``covspde <command> [--config FILE] [flags]``.

Every command reads one JSON run configuration (from ``--config`` and/or
flags), validates it against a schema and writes canonical JSON: sorted keys
and floats with 17 significant digits.  Exit codes: 0 success, 2 schema or
precondition violation, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

import jsonschema
import numpy as np

from . import __version__
from .errors import ConfigError, CovSpdeError, InvalidDimension, NotInCatalog, UnknownFamily
from .lattice import LatticeConfig, dump_fields
from .levynoise import NoiseSpec, sample_noise

SCHEMA_VERSION = 1
COMMANDS = ("cov-solve", "spectrum", "green", "moments", "noise-sample", "mc-verify", "fl-check", "model", "validate")
STOCHASTIC = ("noise-sample", "mc-verify")
EXIT_OK, EXIT_SCHEMA, EXIT_NUMERIC = 0, 2, 3

_NUM = {"type": "number"}
_VEC = {"type": "array", "items": _NUM}
_MAT = {"type": "array", "items": _VEC}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["version"],
    "properties": {
        "version": {"const": SCHEMA_VERSION},
        "command": {"enum": list(COMMANDS)},
        "rep": {"oneOf": [{"type": "string"}, {"type": "object"}]},
        "model": {
            "type": "object",
            "additionalProperties": False,
            "required": ["family"],
            "properties": {
                "family": {"type": "string"},
                "params": {"type": "object", "additionalProperties": _NUM},
            },
        },
        "noise": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "N": {"type": "integer", "minimum": 1},
                "A": _MAT,
                "atoms": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "additionalProperties": False,
                        "required": ["weight", "alpha"],
                        "properties": {"weight": {"type": "number", "exclusiveMinimum": 0}, "alpha": _VEC},
                    },
                },
            },
        },
        "lattice": {
            "type": "object",
            "additionalProperties": False,
            "required": ["L"],
            "properties": {
                "D": {"type": "integer"},
                "L": {"type": "integer"},
                "a": {"type": "number"},
            },
        },
        "mc": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "samples": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer", "minimum": 0},
            },
        },
        "options": {"type": "object"},
        "output": {"type": "string"},
    },
}

OPTION_KEYS = {
    "cov-solve": {"include_mass_terms", "reflection"},
    "spectrum": set(),
    "green": {"points"},
    "moments": {"testfns", "index_sets", "order"},
    "noise-sample": {"count", "dump"},
    "mc-verify": {"check", "threshold", "testfns", "index_sets", "probes", "g", "timing"},
    "fl-check": {"op", "x", "L", "box", "smoothing", "zetas", "ts", "y1", "y2", "e1", "e2"},
    "model": {"emit", "points"},
    "validate": set(),
}

REQUIRED = {
    "cov-solve": ("rep",),
    "spectrum": ("model",),
    "green": ("model",),
    "moments": ("model", "noise", "lattice"),
    "noise-sample": ("noise", "lattice", "mc"),
    "mc-verify": ("model", "noise", "lattice", "mc"),
    "fl-check": (),
    "model": ("model",),
    "validate": (),
}


# ---------------------------------------------------------------- serialization


def _plain(x):
    """Convert numpy and complex values to JSON-ready Python objects."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(np.real(x)), "im": float(np.imag(x))}
    if isinstance(x, (float, np.floating)):
        return float(x)
    return x


def _emit(x, out: list):
    if isinstance(x, dict):
        out.append("{")
        for i, k in enumerate(sorted(x)):
            if i:
                out.append(", ")
            out.append(json.dumps(k) + ": ")
            _emit(x[k], out)
        out.append("}")
    elif isinstance(x, list):
        out.append("[")
        for i, v in enumerate(x):
            if i:
                out.append(", ")
            _emit(v, out)
        out.append("]")
    elif isinstance(x, float):
        out.append(format(x, ".17g") if math.isfinite(x) else "null")
    else:
        out.append(json.dumps(x))


def canonical_json(obj) -> str:
    """Sorted keys, floats as ``.17g``; non-finite floats become ``null``."""
    out: list = []
    _emit(_plain(obj), out)
    return "".join(out) + "\n"


# ---------------------------------------------------------------- configuration


@dataclass(frozen=True)
class Diagnostic:
    path: str
    message: str

    def to_dict(self) -> dict:
        return {"path": self.path, "message": self.message}


def build_model(cfg: dict):
    """Operator or model named by ``cfg['model']``."""
    from .models3d import FAMILIES, ModelParams, build, klein_gordon

    m = cfg["model"]
    fam, params = m["family"], m.get("params", {})
    if fam == "klein_gordon":
        extra = set(params) - {"m"}
        if extra:
            raise UnknownFamily(f"klein_gordon takes ('m',), got extra {sorted(extra)}")
        return klein_gordon(params.get("m", 1.0), 3)
    if fam not in FAMILIES:
        raise UnknownFamily(f"unknown family {fam!r}; known: {', '.join(list(FAMILIES) + ['klein_gordon'])}")
    return build(ModelParams(fam, params))


def build_noise(cfg: dict) -> NoiseSpec:
    return NoiseSpec.from_dict(cfg["noise"])


def build_lattice(cfg: dict) -> LatticeConfig:
    lat = cfg["lattice"]
    return LatticeConfig(lat.get("D", 3), lat["L"], lat.get("a", 1.0))


def build_rep(cfg: dict):
    from .repcore import Representation, catalog_rep

    r = cfg["rep"]
    return catalog_rep(r) if isinstance(r, str) else Representation.from_dict(r)


def validate(config, command: str | None = None) -> list[Diagnostic]:
    """Schema and precondition diagnostics; empty iff ``run`` would start.

    Numeric properties such as admissibility are checked at run time
    (exit code 3), not here.
    """
    if not isinstance(config, dict):
        return [Diagnostic("", "configuration must be a JSON object")]
    if not config:
        return [Diagnostic("", "empty configuration")]
    diags = []
    validator = jsonschema.Draft202012Validator(SCHEMA)
    for err in sorted(validator.iter_errors(config), key=lambda e: list(map(str, e.path))):
        diags.append(Diagnostic("/".join(map(str, err.path)), err.message))
    if diags:
        return diags
    command = command or config.get("command")
    if command is None or command == "validate":
        return []
    for key in REQUIRED[command]:
        if key not in config:
            diags.append(Diagnostic(key, f"{command} needs '{key}'"))
    extra = set(config.get("options", {})) - OPTION_KEYS[command]
    if extra:
        diags.append(Diagnostic("options", f"unknown options for {command}: {sorted(extra)}"))
    if command in STOCHASTIC and "seed" not in config.get("mc", {}):
        diags.append(Diagnostic("mc/seed", f"{command} is stochastic and needs an explicit seed"))
    if command == "fl-check":
        op = config.get("options", {}).get("op", "green")
        if op not in ("green", "identity2", "identityN", "schwinger"):
            diags.append(Diagnostic("options/op", f"unknown fl-check op {op!r}"))
        if op in ("green", "schwinger") and "model" not in config:
            diags.append(Diagnostic("model", f"fl-check {op} needs 'model'"))
    if diags:
        return diags
    built = {}
    for key, fn in (("rep", build_rep), ("model", build_model), ("noise", build_noise), ("lattice", build_lattice)):
        if key in config:
            try:
                built[key] = fn(config)
            except (CovSpdeError, KeyError, TypeError, ValueError) as exc:
                diags.append(Diagnostic(key, str(exc)))
    if "model" in built and "noise" in built and built["model"].N != built["noise"].N:
        diags.append(Diagnostic("noise", f"noise has N={built['noise'].N}, model has N={built['model'].N}"))
    if "model" in built and "lattice" in built and built["model"].D != built["lattice"].D:
        diags.append(Diagnostic("lattice/D", f"lattice D={built['lattice'].D}, model D={built['model'].D}"))
    if command == "mc-verify":
        from .latticemc import MIN_SAMPLES

        if config["mc"].get("samples", 1000) < MIN_SAMPLES:
            diags.append(Diagnostic("mc/samples", f"need at least {MIN_SAMPLES} samples"))
    return diags


def notices(config: dict) -> list[str]:
    """Non-fatal remarks, e.g. automatic symmetrization of the Levy measure."""
    out = []
    if isinstance(config, dict) and "noise" in config:
        try:
            if build_noise(config).symmetrized:
                out.append("Levy measure was not symmetric; atoms were symmetrized "
                           "(mirrors added and +-alpha weights averaged)")
        except (CovSpdeError, KeyError, TypeError, ValueError):
            pass
    return out


# ---------------------------------------------------------------- commands


def _testfns(cfg, lattice, N):
    from .latticemc import load_probes, probe_testfn

    probes = load_probes()
    opts = cfg.get("options", {})
    descs = opts.get("testfns", probes["testfns"])
    sets = [tuple(s) for s in opts.get("index_sets", probes["moments"])]
    if "order" in opts:
        n = int(opts["order"])
        sets = [S for S in sets if len(S) == n] or [(k,) * n for k in range(len(descs))]
    return [probe_testfn(lattice, N, d) for d in descs], sets


def _spectrum_dict(spec) -> dict:
    return {"C": complex(spec.C), "masses2": [complex(m) for m in spec.masses2], "degree": spec.degree,
            "admissible": spec.admissible, "distinct": spec.distinct, "note": spec.note}


def cmd_cov_solve(cfg) -> dict:
    from .covsolve import commutant_mass_terms, solve_cov_space

    rep = build_rep(cfg)
    basis = solve_cov_space(rep)
    out = {"rep": rep.label, "N": rep.N, "D": rep.D, "dimension": len(basis),
           "basis": [[b.tolist() for b in op.B] for op in basis],
           "residuals": [op.covariance_residual() for op in basis]}
    if cfg.get("options", {}).get("include_mass_terms", True):
        out["mass_terms"] = [M.tolist() for M in commutant_mass_terms(rep)]
    if "reflection" in cfg.get("options", {}):
        from .covsolve import reflection_covariant_subspace
        from .repcore import reflection_image

        sign = cfg["options"]["reflection"]
        R = reflection_image(rep, sign)
        sub = reflection_covariant_subspace(rep, R)
        out["reflection"] = {"parity": sign, "image": R.tolist(), "dimension": len(sub),
                             "basis": [[b.tolist() for b in op.B] for op in sub]}
    return out


def cmd_spectrum(cfg) -> dict:
    from .symcalc import spectrum_of

    return _spectrum_dict(spectrum_of(build_model(cfg)))


def _points(cfg, D):
    pts = cfg.get("options", {}).get("points")
    if pts is None:
        pts = np.random.default_rng(0).normal(size=(3, D))
    pts = np.asarray(pts, dtype=float).reshape(-1, D)
    return pts


def cmd_green(cfg) -> dict:
    from .symcalc import green_of, green_partial_fractions

    op = build_model(cfg)
    G = green_of(op)
    pts = _points(cfg, op.D)
    shells = {}
    for a in range(G.N):
        for b in range(G.N):
            pf = green_partial_fractions(G, a, b)
            shells[f"{a},{b}"] = {"masses2": [complex(t.m2) for t in pf.terms],
                                  "contact_degree": pf.contact.degree()}
    return {"spectrum": _spectrum_dict(G.spectrum), "denominator": [complex(c) for c in G.den_coeffs],
            "points": pts, "values": [G(p) for p in pts], "shells": shells}


def cmd_moments(cfg) -> dict:
    from .momenteng import solution_moments

    op, spec, lat = build_model(cfg), build_noise(cfg), build_lattice(cfg)
    fs, sets = _testfns(cfg, lat, op.N)
    from .momenteng import bell, perfect_matchings

    vals = [solution_moments(op, spec, [fs[i] for i in S], lat) for S in sets]
    counts = [{"partitions": bell(len(S)), "gaussian_pairings": len(perfect_matchings(range(len(S))))}
              for S in sets]
    return {"index_sets": [list(S) for S in sets], "values": vals, "term_counts": counts,
            "lattice": lat.to_dict(), "noise": spec.to_dict()}


def cmd_noise_sample(cfg) -> dict:
    spec, lat = build_noise(cfg), build_lattice(cfg)
    seed = int(cfg["mc"]["seed"])
    opts = cfg.get("options", {})
    count = int(opts.get("count", 1))
    samples = [sample_noise(spec, lat, seed, i) for i in range(count)]
    if "dump" in opts:
        dump_fields(opts["dump"], samples)
    vals = np.stack([s.values for s in samples]).reshape(-1, spec.N)
    return {"seed": seed, "count": count, "lattice": lat.to_dict(), "N": spec.N,
            "mean": vals.mean(axis=0),
            "second_moment": vals.T @ vals / len(vals),
            "points": [int(s.meta.get("points", 0)) for s in samples],
            "dump": opts.get("dump")}


def cmd_mc_verify(cfg) -> dict:
    from . import latticemc as mc

    op, spec, lat = build_model(cfg), build_noise(cfg), build_lattice(cfg)
    seed, samples = int(cfg["mc"]["seed"]), int(cfg["mc"].get("samples", 1000))
    opts = cfg.get("options", {})
    check = opts.get("check", "two-point")
    thr = float(opts.get("threshold", 5.0))
    if check == "two-point":
        rep = mc.empirical_two_point(op, spec, lat, samples, seed, opts.get("probes"))
    elif check == "moments":
        fs, sets = _testfns(cfg, lat, op.N)
        rep = mc.empirical_moments(op, spec, fs, sets, lat, samples, seed)
    elif check == "char":
        fs, _ = _testfns(cfg, lat, op.N)
        rep = mc.empirical_char_functional(op, spec, fs, lat, samples, seed)
    elif check == "transform":
        g = opts.get("g", [0.0] * (lat.D * (lat.D - 1) // 2 - 1) + [math.pi / 2])
        rep = mc.covariance_transform_check(op, spec, lat, g, samples, seed, opts.get("probes"))
    else:
        raise ConfigError(f"unknown mc check {check!r}")
    out = rep.to_dict()
    if not opts.get("timing", False):
        out["wall_time"] = None  # keeps the JSON a pure function of (config, seed)
    out.update({"check": check, "threshold": thr, "max_abs_z": rep.max_abs_z, "passed": rep.passed(thr)})
    return out


def cmd_fl_check(cfg) -> dict:
    from . import flwightman as fl

    opts = cfg.get("options", {})
    op_name = opts.get("op", "green")
    if op_name == "identity2":
        z = [complex(*v) if isinstance(v, list) else complex(v) for v in opts.get("zetas", [1.0, 1.0])]
        t = opts.get("ts", [0.0, 1.0])
        r = fl.conv_identity2(z[0], z[1], t[0], t[1])
        return {"op": op_name, "lhs": r.lhs, "rhs": r.rhs, "residual": r.residual}
    if op_name == "identityN":
        z = [complex(*v) if isinstance(v, list) else complex(v) for v in opts.get("zetas", [1.0, 1.0, 1.0])]
        r = fl.conv_identity_n(z, opts.get("ts", list(range(len(z)))))
        return {"op": op_name, "lhs": r.lhs, "rhs": r.rhs, "residual": r.residual}
    model = build_model(cfg)
    grid = {k: opts[k] for k in ("L", "box", "smoothing") if k in opts}
    if op_name == "green":
        r = fl.verify_fl_green(model, opts.get("x", [1.0, 0.0, 0.0]), **grid)
    else:
        r = fl.schwinger_fl_check(model, opts.get("y1", [0.0, 0.0, 0.0]), opts.get("y2", [3.0, 0.5, 0.0]),
                                  tuple(opts.get("e1", (0, 0))), tuple(opts.get("e2", (0, 0))), **grid)
    return {"op": op_name, "lhs": r.lhs, "rhs": r.rhs, "residual": r.residual, "quadrature": r.meta}


def cmd_model(cfg) -> dict:
    from . import models3d as m3
    from .momenteng import schwinger2
    from .symcalc import det_poly, green_of, symbol

    op = build_model(cfg)
    emit = cfg.get("options", {}).get("emit", "symbol")
    fam = cfg["model"]["family"]
    out = {"family": fam, "emit": emit}
    if emit == "symbol":
        out["operator"] = op.to_dict() if hasattr(op, "to_dict") else {"m": op.m, "D": op.D}
        if not hasattr(op, "symbol_values"):
            out["symbol"] = symbol(op).to_dict()
    elif emit == "det":
        if hasattr(op, "symbol_values"):
            raise ConfigError("det is available only for first-order catalog families")
        out["computed"] = [complex(c) for c in det_poly(symbol(op)).s_coeffs]
        cmp = m3.compare_determinant(m3.ModelParams(fam, cfg["model"].get("params", {})))
        out["printed"] = list(cmp.printed)
        out["agrees"] = cmp.agrees
        out["max_rel_diff"] = cmp.max_rel_diff
        out["note"] = cmp.note
    elif emit == "green":
        G = green_of(op)
        pts = _points(cfg, op.D)
        out["points"] = pts
        out["values"] = [G(p) for p in pts]
        out["spectrum"] = _spectrum_dict(G.spectrum)
    elif emit == "schwinger":
        spec = build_noise(cfg) if "noise" in cfg else NoiseSpec(np.eye(op.N))
        S = schwinger2(op, spec)
        pts = _points(cfg, op.D)
        out["points"] = pts
        out["values"] = [S(p) for p in pts]
    else:
        raise ConfigError(f"unknown emit target {emit!r}")
    return out


HANDLERS = {
    "cov-solve": cmd_cov_solve,
    "spectrum": cmd_spectrum,
    "green": cmd_green,
    "moments": cmd_moments,
    "noise-sample": cmd_noise_sample,
    "mc-verify": cmd_mc_verify,
    "fl-check": cmd_fl_check,
    "model": cmd_model,
}

CONFIG_ERRORS = (ConfigError, UnknownFamily, NotInCatalog, InvalidDimension)


def run(command: str, config: dict) -> tuple[int, dict]:
    """Execute ``command``; returns ``(exit_code, payload)``."""
    if command == "validate":
        target = config.get("command") if isinstance(config, dict) else None
        diags = validate(config, target)
        return (EXIT_SCHEMA if diags else EXIT_OK,
                {"diagnostics": [d.to_dict() for d in diags], "notices": notices(config), "valid": not diags})
    diags = validate(config, command)
    if diags:
        return EXIT_SCHEMA, {"error": "schema", "diagnostics": [d.to_dict() for d in diags]}
    try:
        result = HANDLERS[command](config)
    except CONFIG_ERRORS as exc:
        return EXIT_SCHEMA, {"error": "schema", "diagnostics": [{"path": "", "message": str(exc)}]}
    except (CovSpdeError, np.linalg.LinAlgError, ArithmeticError) as exc:
        return EXIT_NUMERIC, {"error": "numeric", "code": getattr(exc, "code", type(exc).__name__),
                              "message": str(exc), "details": _plain(getattr(exc, "details", {}))}
    payload = {"command": command, "version": SCHEMA_VERSION, "result": result}
    note = notices(config)
    if note:
        payload["notices"] = note
    return EXIT_OK, payload


# ---------------------------------------------------------------- argparse


def _kv(text: str) -> dict:
    out = {}
    for item in filter(None, text.split(",")):
        k, _, v = item.partition("=")
        out[k.strip()] = float(v)
    return out


def _floats(text: str) -> list:
    return [float(x) for x in text.split(",") if x.strip()]


def _lattice_arg(text: str) -> dict:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected L,a")
    return {"L": int(parts[0]), "a": float(parts[1])}


def _signs(text: str):
    s = [int(x) for x in text.split(",")]
    if any(v not in (1, -1) for v in s):
        raise argparse.ArgumentTypeError("parity signs must be 1 or -1")
    return s[0] if len(s) == 1 else s


def _load(path):
    with open(path) as fh:
        return json.load(fh)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="covspde", description="Covariant SPDEs with Levy noise.")
    ap.add_argument("--version", action="version", version=f"covspde {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON run configuration")
        p.add_argument("--out", help="write JSON here instead of stdout")
        p.add_argument("--seed", type=int)
        p.add_argument("--samples", type=int)
        p.add_argument("--family", "--model", dest="family", help="model family")
        p.add_argument("--params", type=_kv, help="comma separated name=value pairs")
        p.add_argument("--rep", help="catalog representation name")
        p.add_argument("--L", type=int, help="lattice sites per axis")
        p.add_argument("--lattice", type=_lattice_arg, help="L,a")
        p.add_argument("--noise", help="JSON file with a noise object")
        if name == "cov-solve":
            p.add_argument("--reflection", type=_signs, help="parity sign, or one sign per block: 1,-1")
        if name in ("green", "model"):
            p.add_argument("--at", type=_floats, action="append", help="momentum p0,p1,...; repeatable")
        if name in ("moments", "mc-verify"):
            p.add_argument("--order", type=int, help="moment order")
            p.add_argument("--testfns", help="JSON file with a list of test function descriptors")
        if name == "mc-verify":
            p.add_argument("--check", choices=("two-point", "moments", "char", "transform"))
            p.add_argument("--timing", action="store_true", help="record wall time (breaks byte determinism)")
        if name == "model":
            p.add_argument("--emit", choices=("symbol", "det", "green", "schwinger"))
        if name == "fl-check":
            p.add_argument("--op", choices=("green", "identity2", "identityN", "schwinger"))
    return ap


def config_from_args(args) -> dict:
    cfg: dict = {}
    if args.config:
        with open(args.config) as fh:
            cfg = json.load(fh)
        if not isinstance(cfg, dict):
            return cfg
    extras = ("emit", "op", "reflection", "at", "order", "testfns", "check")
    if any(v is not None for v in (args.family, args.params, args.rep, args.seed, args.samples, args.L,
                                   args.lattice, args.noise, *(getattr(args, k, None) for k in extras))) \
            or getattr(args, "timing", False):
        cfg.setdefault("version", SCHEMA_VERSION)
    if args.family is not None:
        cfg["model"] = {"family": args.family, "params": args.params or {}}
    elif args.params is not None and "model" in cfg:
        cfg["model"]["params"] = {**cfg["model"].get("params", {}), **args.params}
    if args.rep is not None:
        cfg["rep"] = args.rep
    if args.seed is not None:
        cfg.setdefault("mc", {})["seed"] = args.seed
    if args.samples is not None:
        cfg.setdefault("mc", {})["samples"] = args.samples
    if args.L is not None:
        cfg.setdefault("lattice", {})["L"] = args.L
    if args.lattice is not None:
        cfg["lattice"] = {**cfg.get("lattice", {}), **args.lattice}
    if args.noise is not None:
        cfg["noise"] = _load(args.noise)
    opts = {}
    for key in ("reflection", "order", "check"):
        if getattr(args, key, None) is not None:
            opts[key] = getattr(args, key)
    if getattr(args, "at", None):
        opts["points"] = args.at
    if getattr(args, "testfns", None):
        opts["testfns"] = _load(args.testfns)
    if getattr(args, "timing", False):
        opts["timing"] = True
    if opts:
        cfg.setdefault("options", {}).update(opts)
    if getattr(args, "emit", None):
        cfg.setdefault("options", {})["emit"] = args.emit
    if getattr(args, "op", None):
        cfg.setdefault("options", {})["op"] = args.op
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (OSError, json.JSONDecodeError) as exc:
        code, payload = EXIT_SCHEMA, {"error": "schema", "diagnostics": [{"path": "", "message": str(exc)}]}
    else:
        code, payload = run(args.command, cfg)
    text = canonical_json(payload)
    out = args.out or (cfg.get("output") if isinstance(cfg, dict) and code == EXIT_OK else None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
