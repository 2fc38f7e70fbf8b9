"""Config ingestion, spec parsing, the curve-table cache and verdict reports.

Reports are plain dicts that serialize deterministically: keys sorted,
classes as integer arrays in the basis ``(L, E1, ..., Em)``, rationals as
``[numerator, denominator]``.  Nothing depends on the clock, the cache or
the environment, so the same input gives byte-identical output.
"""
from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

import jsonschema

from . import __version__, cones, flex
from .cones import Cone
from .cylinders import Cylinder, make_cuspcubic, make_generic, make_lines, make_tangent
from .errors import ConfigError
from .lattice import (Contraction, DegenerationData, DivisorClass, SurfaceType, make_contraction,
                      new_surface, pairing)

CAVEATS = ["very ampleness is not checked; verdicts concern ample classes"]
CACHE_FORMAT = 1


def load_schema(name: str) -> dict:
    return json.loads(resources.files("dpflex").joinpath("schemas", f"{name}.schema.json").read_text())


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _sha(obj: Any) -> str:
    return hashlib.sha256(json.dumps(obj, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class SurfaceConfig:
    degree: int
    degenerations: DegenerationData = DegenerationData()
    flags: dict = field(default_factory=dict)

    def canonical(self) -> dict:
        return {"degree": self.degree, "degenerations": self.degenerations.canonical(),
                "flags": dict(sorted(self.flags.items()))}

    @property
    def admits_cuspidal(self) -> bool:
        return bool(self.flags.get("admits_cuspidal_anticanonical", True))


def parse_config(data: Any, source: str = "config") -> SurfaceConfig:
    """Validate a config mapping against the shipped schema."""
    validator = jsonschema.Draft202012Validator(load_schema("config"))
    errors = sorted(validator.iter_errors(data), key=lambda e: list(map(str, e.absolute_path)))
    if errors:
        e = errors[0]
        where = "".join(f"[{p}]" if isinstance(p, int) else f".{p}" for p in e.absolute_path)
        if source.startswith("--"):
            where = ""  # a flag value, not a file: the flag is the address
        raise ConfigError(f"{source}{where}: {e.message}")
    deg = DegenerationData(
        collinear_triples=data.get("collinear_triples", ()),
        infinitely_near=[tuple(p) for p in data.get("infinitely_near", ())],
        conic_sixes=data.get("conic_sixes", ()),
        cusp_cubics=[(n, s) for n, s in data.get("cusp_cubics", ())],
    )
    return SurfaceConfig(data["degree"], deg, dict(data.get("flags", {})))


def read_config(path: str | None, degree: int | None) -> SurfaceConfig:
    if path is None:
        if degree is None:
            raise ConfigError("give --degree or --config")
        return parse_config({"degree": degree}, "--degree")
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if degree is not None and isinstance(data, dict) and data.get("degree", degree) != degree:
        raise ConfigError(f"--degree {degree} contradicts degree {data.get('degree')} in {path}")
    if isinstance(data, dict) and degree is not None:
        data.setdefault("degree", degree)
    return parse_config(data, path)


# ---------------------------------------------------------------------------
# curve-table cache


def default_cache_dir() -> Path:
    env = os.environ.get("DPFLEX_CACHE_DIR")
    if env:
        return Path(env)
    return Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "dpflex"


class CurveCache:
    """JSON files of (-1)-curves, (-2)-curves and contractions, keyed by surface type.

    Entries are checked against the lattice invariants on load; a damaged
    entry is ignored and rewritten.
    """

    def __init__(self, directory: str | os.PathLike | None):
        self.directory = Path(directory) if directory is not None else None

    def key(self, cfg: SurfaceConfig) -> str:
        return _sha({"format": CACHE_FORMAT, "degree": cfg.degree,
                     "degenerations": cfg.degenerations.canonical()})

    def _path(self, cfg: SurfaceConfig) -> Path:
        return self.directory / f"curves-{self.key(cfg)}.json"

    def load(self, S: SurfaceType, cfg: SurfaceConfig) -> bool:
        if self.directory is None:
            return False
        try:
            data = json.loads(self._path(cfg).read_text())
            minus_one = tuple(DivisorClass(v) for v in data["minus_one"])
            minus_two = tuple(DivisorClass(v) for v in data["minus_two"])
            contractions = None
            if data.get("contractions") is not None:
                contractions = tuple(make_contraction(S, c) for c in data["contractions"])
        except (OSError, ValueError, KeyError, TypeError):
            return False
        if minus_two != S.minus_two or not _valid_minus_one(S, minus_one):
            return False
        S.__dict__["minus_one"] = minus_one
        if contractions is not None:
            S.__dict__["_contractions"] = contractions
        self._stored = (self.key(cfg), contractions is not None)
        return True

    def store(self, S: SurfaceType, cfg: SurfaceConfig) -> None:
        """Write the tables known for ``S``; contractions only once they were enumerated."""
        if self.directory is None:
            return
        have = "_contractions" in S.__dict__
        if getattr(self, "_stored", None) in ((self.key(cfg), True), (self.key(cfg), have)):
            return
        payload = {
            "degree": cfg.degree,
            "degenerations": cfg.degenerations.canonical(),
            "minus_one": [list(D) for D in S.minus_one],
            "minus_two": [list(D) for D in S.minus_two],
            "contractions": ([[list(e) for e in c.exceptional_classes]
                              for c in S.__dict__["_contractions"]] if have else None),
        }
        self.directory.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".curves-", suffix=".tmp")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(dumps(payload))
            os.replace(tmp, self._path(cfg))
            self._stored = (self.key(cfg), have)
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise


def _valid_minus_one(S: SurfaceType, classes: Sequence[DivisorClass]) -> bool:
    return (list(classes) == sorted(set(classes)) and len(classes) > 0
            and all(len(D) == S.m + 1 and pairing(D, D) == -1 and pairing(D, S.K) == -1
                    and all(pairing(D, F) >= 0 for F in S.minus_two) for D in classes))


def build_surface(cfg: SurfaceConfig, cache: CurveCache | None = None) -> SurfaceType:
    S = new_surface(cfg.degree, cfg.degenerations)
    if cache is not None and not cache.load(S, cfg):
        cache.store(S, cfg)
    return S


def finish_surface(S: SurfaceType, cfg: SurfaceConfig, cache: CurveCache | None) -> None:
    """Persist tables computed while a command ran (contractions, typically)."""
    if cache is not None:
        cache.store(S, cfg)


# ---------------------------------------------------------------------------
# spec grammar


def _points(text: str, what: str) -> list[int]:
    """``4..8``, ``1+3+5`` or mixtures like ``1..3+6``; empty text is the empty set."""
    pts: list[int] = []
    for part in filter(None, text.strip().split("+")):
        mt = re.fullmatch(r"\s*(\d+)\s*(?:\.\.\s*(\d+)\s*)?", part)
        if not mt:
            raise ConfigError(f"{what}: cannot read points {text!r}")
        lo = int(mt.group(1))
        hi = int(mt.group(2)) if mt.group(2) else lo
        pts.extend(range(lo, hi + 1))
    return pts


def _spec_params(body: str, what: str) -> dict[str, str]:
    params = {}
    for item in filter(None, (x.strip() for x in body.split(","))):
        if "=" not in item:
            raise ConfigError(f"{what}: expected key=value, got {item!r}")
        k, v = item.split("=", 1)
        params[k.strip()] = v.strip()
    return params


def parse_construction(S: SurfaceType, spec: str, cfg: SurfaceConfig | None = None,
                       base: Path | None = None) -> Cylinder:
    """One cylinder from a construction spec.

    ``lines:7``, ``cuspcubic:last4`` (or ``first4``, or ``3+4+5+6``),
    ``tangent:conic=4..8,tangent=3,groups=[1|2]``, ``generic:@file.json``.
    """
    tag, _, body = spec.partition(":")
    tag = tag.strip()
    what = f"--construction {spec!r}"
    if tag == "lines":
        pts = _points(body, what)
        if len(pts) != 1:
            raise ConfigError(f"{what}: lines needs exactly one center")
        return make_lines(S, None, pts[0])
    if tag == "cuspcubic":
        body = body.strip() or "last4"
        if body == "last4":
            four = list(range(S.m - 3, S.m + 1))
        elif body == "first4":
            four = [1, 2, 3, 4]
        else:
            four = _points(body.replace(",", "+"), what)
        admits = cfg.admits_cuspidal if cfg is not None else True
        return make_cuspcubic(S, None, four, admits_cuspidal_anticanonical=admits)
    if tag == "tangent":
        # groups contain '|' and may contain ','-free point lists only
        params = _spec_params(body, what)
        unknown = set(params) - {"conic", "tangent", "groups"}
        if unknown:
            raise ConfigError(f"{what}: unknown tangent parameters {sorted(unknown)}")
        groups_text = params.get("groups", "").strip()
        if groups_text.startswith("[") and groups_text.endswith("]"):
            groups_text = groups_text[1:-1]
        groups = [_points(g, what) for g in groups_text.split("|") if g.strip()]
        return make_tangent(S, None, _points(params.get("conic", ""), what),
                            _points(params.get("tangent", ""), what), groups)
    if tag == "generic":
        body = body.strip()
        if not body.startswith("@"):
            raise ConfigError(f"{what}: generic needs @file")
        path = Path(body[1:])
        if base is not None and not path.is_absolute():
            path = base / path
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise ConfigError(f"{what}: cannot read {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        missing = {"complement", "support", "fiber"} - set(data)
        if missing:
            raise ConfigError(f"{path}: missing fields {sorted(missing)}")
        contraction = None
        if "contraction" in data:
            contraction = make_contraction(S, data["contraction"])
        return make_generic(S, contraction, data["complement"], data["support"], data["fiber"],
                            data.get("transversal"), data.get("movable", ()))
    raise ConfigError(f"{what}: unknown construction {tag!r}")


def parse_cone(S: SurfaceType, spec: str) -> tuple[str, Cone]:
    """A cone label (``B(3)``, ``C(P)``, ``C``), ``Ample``, ``NE``, a JSON ray list or ``@file``."""
    text = spec.strip()
    n = S.m + 1
    if text == "Ample":
        return text, flex.ample_cone(S)
    if text == "NE":
        return text, flex.mori_cone(S)
    if text.startswith("@"):
        try:
            text = Path(text[1:]).read_text()
        except OSError as exc:
            raise ConfigError(f"--cone: cannot read {text[1:]}: {exc.strerror}") from None
    if text.lstrip().startswith("["):
        try:
            rays = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--cone: bad ray list: {exc.msg}") from None
        if not isinstance(rays, list) or not all(
                isinstance(r, list) and all(isinstance(x, int) and not isinstance(x, bool) for x in r)
                for r in rays):
            raise ConfigError("--cone: rays must be a list of integer arrays")
        C = cones.from_rays(n, rays)
        return "rays", C
    lab = flex.ConeLabel.parse(text)
    return str(lab), flex.cone_representative(S, lab)


# ---------------------------------------------------------------------------
# report pieces


def _vecs(vs) -> list[list[int]]:
    return [list(map(int, v)) for v in vs]


def cone_record(C: Cone, label: str | None = None, facets: bool = False) -> dict:
    rec = {"rays": _vecs(C.rays), "lineality": _vecs(C.lineality), "dim": C.dim}
    if label is not None:
        rec["label"] = label
    if facets:
        rec["inequalities"] = _vecs(C.inequalities)
        rec["equations"] = _vecs(C.equations)
    return rec


def _jsonable(x):
    if isinstance(x, (tuple, list)):
        return [_jsonable(y) for y in x]
    return x


def cylinder_record(U: Cylinder) -> dict:
    return {
        "construction": U.construction,
        "params": {k: _jsonable(v) for k, v in U.params},
        "contraction": _vecs(U.contraction.exceptional_classes),
        "complement": _vecs(U.complement),
        "support": _vecs(U.support),
        "movable": _vecs(sorted(U.movable)),
        "fiber": list(U.fiber),
        "transversal": U.transversal,
    }


def rational(q: Fraction) -> list[int]:
    return [q.numerator, q.denominator]


def surface_record(S: SurfaceType, cfg: SurfaceConfig) -> dict:
    return {
        "degree": S.degree,
        "degenerations": S.degenerations.canonical(),
        "degeneration_types": S.degenerations.kinds(),
        "curve_counts": {"minus_one": len(S.minus_one), "minus_two": len(S.minus_two)},
        "anticanonical": list(S.anticanonical),
        "cone_types": [str(l) for l in flex.cone_types(S)],
        "flags": dict(sorted(cfg.flags.items())),
    }


def _base(command: str, S: SurfaceType, cfg: SurfaceConfig, inputs: dict) -> dict:
    return {
        "tool": {"name": "dpflex", "version": __version__},
        "command": command,
        "input_hash": _sha({"command": command, "config": cfg.canonical(), **inputs}),
        "surface": surface_record(S, cfg),
    }


# ---------------------------------------------------------------------------
# commands


def cmd_surface(S: SurfaceType, cfg: SurfaceConfig) -> dict:
    return _base("surface", S, cfg, {})


def cmd_curves(S: SurfaceType, cfg: SurfaceConfig) -> dict:
    rep = _base("curves", S, cfg, {})
    rep["curves"] = {"minus_one": _vecs(S.minus_one), "minus_two": _vecs(S.minus_two)}
    return rep


def cmd_cones(S: SurfaceType, cfg: SurfaceConfig, cone_spec: str | None = None) -> dict:
    rep = _base("cones", S, cfg, {"cone": cone_spec})
    if cone_spec is None:
        rep["cones"] = [cone_record(flex.cone_representative(S, lab), str(lab))
                        for lab in flex.cone_types(S)]
    else:
        label, C = parse_cone(S, cone_spec)
        rep["cone"] = cone_record(C, label, facets=True)
    return rep


def _collection_record(col: flex.CylinderCollection, K: Cone, volume: bool) -> dict:
    rec = {
        "size": len(col),
        "cylinders": [cylinder_record(U) for U in col],
        "pol": cone_record(col.pol),
        "forb": cone_record(col.forb),
        "verdicts": flex.verdicts(col, K),
        "compatible_representatives": [str(l) for l in flex.compatible_representatives(col)],
    }
    if volume:
        rec["coverage"] = (rational(flex.coverage_fraction(col.surface, K, [col]))
                           if len(col) else rational(Fraction(0)))
    return rec


def cmd_check(S: SurfaceType, cfg: SurfaceConfig, constructions: Sequence[str], cone_spec: str,
              volume: bool = False) -> dict:
    if not constructions:
        raise ConfigError("check needs at least one --construction")
    label, K = parse_cone(S, cone_spec)
    col = flex.collection([parse_construction(S, spec, cfg) for spec in constructions], S)
    rep = _base("check", S, cfg, {"constructions": list(constructions), "cone": cone_spec,
                                  "volume": volume})
    rep["cone"] = cone_record(K, label)
    rep["collection"] = _collection_record(col, K, volume)
    rep["caveats"] = CAVEATS
    return rep


def _tags(constructions: Sequence[str]) -> list[str]:
    tags = sorted({t.strip() for c in constructions for t in c.split(",") if t.strip()})
    bad = [t for t in tags if t not in ("lines", "tangent", "cuspcubic")]
    if bad:
        raise ConfigError(f"--construction: cover takes construction tags, not {bad}")
    return tags


def cmd_cover(S: SurfaceType, cfg: SurfaceConfig, constructions: Sequence[str], cone_spec: str,
              reduce: bool = False, polar_filter: bool = False, volume: bool = False) -> dict:
    tags = _tags(constructions)
    label, K = parse_cone(S, cone_spec)
    col = flex.all_cylinders(S, tags)
    if not cfg.admits_cuspidal and S.degree == 2:
        col = flex.CylinderCollection([U for U in col if U.construction != "cuspcubic"], S)
    if polar_filter:
        col = flex.make_polar_on(col, K)
    if reduce:
        col = flex.reduce(col)
    options = {"reduce": reduce, "polar_filter": polar_filter, "volume": volume}
    rep = _base("cover", S, cfg, {"constructions": tags, "cone": cone_spec, **options})
    rep["cone"] = cone_record(K, label)
    rec = _collection_record(col, K, volume)
    rec["constructions"] = tags
    rec["options"] = options
    rep["collection"] = rec
    rep["caveats"] = CAVEATS
    return rep


# ---------------------------------------------------------------------------
# text rendering


def _cls(v) -> str:
    return str(DivisorClass(v))


def _cone_text(c: dict) -> str:
    parts = [_cls(r) for r in c["rays"]]
    if c["lineality"]:
        parts.append("lineality " + " ".join(_cls(r) for r in c["lineality"]))
    return ", ".join(parts) or "0"


def render_text(rep: dict) -> str:
    s = rep["surface"]
    lines = [f"dpflex {rep['tool']['version']}  {rep['command']}  input {rep['input_hash'][:12]}"]
    kinds = ", ".join(s["degeneration_types"]) or "none"
    lines.append(f"surface: degree {s['degree']}, degenerations: {kinds}, "
                 f"{s['curve_counts']['minus_one']} (-1)-curves, "
                 f"{s['curve_counts']['minus_two']} (-2)-curves")
    if rep["command"] == "surface":
        lines.append(f"-K = {_cls(s['anticanonical'])}")
        lines.append("cone types: " + " ".join(s["cone_types"]))
    if "curves" in rep:
        for name in ("minus_one", "minus_two"):
            lines.append(f"{name}:")
            lines.extend(f"  {_cls(v)}" for v in rep["curves"][name])
    for c in rep.get("cones", []):
        lines.append(f"{c['label']}: " + ", ".join(_cls(r) for r in c["rays"]))
    if "cone" in rep:
        c = rep["cone"]
        lines.append(f"cone {c.get('label', '')} (dim {c['dim']}): "
                     + ", ".join(_cls(r) for r in c["rays"]))
        if c["lineality"]:
            lines.append("  lineality: " + ", ".join(_cls(r) for r in c["lineality"]))
    if "collection" in rep:
        col = rep["collection"]
        lines.append(f"collection: {col['size']} cylinders")
        for U in col.get("cylinders", [])[:50]:
            args = " ".join(f"{k}={v}" for k, v in sorted(U["params"].items()))
            lines.append(f"  {U['construction']} {args}".rstrip())
        if col["size"] > 50:
            lines.append(f"  ... {col['size'] - 50} more")
        lines.append("Pol: " + _cone_text(col["pol"]))
        lines.append("Forb: " + _cone_text(col["forb"]))
        for k in ("polar", "complete", "transversal", "generically_flexible"):
            lines.append(f"{k}: {col['verdicts'][k]}")
        lines.append("compatible representatives: " + " ".join(col["compatible_representatives"]))
        if col.get("coverage") is not None:
            num, den = col["coverage"]
            lines.append(f"coverage: {num}/{den}")
    for c in rep.get("caveats", []):
        lines.append(f"note: {c}")
    return "\n".join(lines) + "\n"
