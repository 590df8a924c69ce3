"""JSON scene and certificate documents.

Scalars are written as shortest round-trip floats in the float backend and as
``"num/den"`` strings (``"a+b*sqrt(3)"`` for surds) in the rational backend.
"""

from __future__ import annotations

import hashlib
import json

from .certifier import Certificate, DilationWitness, PeelStep, Verification, verify_certificate
from .configurations import Scene
from .errors import DimensionError, DocumentError, EmptyBody, UnboundedBody
from .geometry import ConvexBody, Direction, HalfSpace
from .numeric import Backend, format_scalar, parse_scalar
from .planks import Plank

VERSION = 1


def _dumps(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def _vec(v):
    return [format_scalar(c) for c in v]


def _hs(h: HalfSpace):
    return {"normal": _vec(h.normal), "offset": format_scalar(h.offset)}


def scene_to_dict(scene: Scene) -> dict:
    doc = {
        "version": VERSION,
        "dim": scene.dim,
        "body": {"halfspaces": [_hs(h) for h in scene.body.halfspaces]},
        "planks": [
            {"normal": _vec(p.normal.unit), "lo": format_scalar(p.lo), "hi": format_scalar(p.hi)}
            for p in scene.planks
        ],
    }
    if scene.label:
        doc["label"] = scene.label
    return doc


def emit_scene(scene: Scene) -> str:
    return _dumps(scene_to_dict(scene))


def scene_digest(scene: Scene) -> str:
    return hashlib.sha256(emit_scene(scene).encode("utf-8")).hexdigest()


def _scalar(x, backend: Backend, what: str):
    try:
        return parse_scalar(x, backend.exact)
    except ValueError as exc:
        raise DocumentError(f"{what}: {exc}") from exc


def _vector(xs, backend, what, dim=None):
    if not isinstance(xs, list):
        raise DocumentError(f"{what}: expected a list")
    if dim is not None and len(xs) != dim:
        raise DocumentError(f"{what}: expected {dim} coordinates, got {len(xs)}")
    return tuple(_scalar(x, backend, what) for x in xs)


def _halfspace(obj, backend, dim, what):
    if not isinstance(obj, dict) or "normal" not in obj or "offset" not in obj:
        raise DocumentError(f"{what}: expected an object with normal and offset")
    try:
        return HalfSpace(_vector(obj["normal"], backend, what, dim), _scalar(obj["offset"], backend, what))
    except ValueError as exc:
        raise DocumentError(f"{what}: {exc}") from exc


def _body(obj, backend, dim, what) -> ConvexBody:
    if not isinstance(obj, list):
        raise DocumentError(f"{what}: expected a halfspace list")
    hs = [_halfspace(h, backend, dim, f"{what}[{i}]") for i, h in enumerate(obj)]
    try:
        return ConvexBody(dim, tuple(hs), backend)
    except (UnboundedBody, DimensionError) as exc:
        raise DocumentError(f"{what}: {exc}") from exc


def _load(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc


def scene_from_dict(doc, backend: Backend) -> Scene:
    if not isinstance(doc, dict):
        raise DocumentError("scene document must be a JSON object")
    if doc.get("version") != VERSION:
        raise DocumentError(f"unsupported scene version {doc.get('version')!r}")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise DocumentError("dim must be a positive integer")
    body_doc = doc.get("body")
    if not isinstance(body_doc, dict):
        raise DocumentError("missing body")
    if "vertices" in body_doc:
        if dim != 2:
            raise DocumentError("vertex lists are only accepted for dim 2")
        verts = [_vector(v, backend, "body.vertices", 2) for v in body_doc["vertices"]]
        try:
            body = ConvexBody.from_vertices_2d(verts, backend)
        except EmptyBody as exc:
            raise DocumentError(f"body.vertices: {exc}") from exc
    elif "halfspaces" in body_doc:
        body = _body(body_doc["halfspaces"], backend, dim, "body.halfspaces")
    else:
        raise DocumentError("body needs vertices or halfspaces")
    planks = []
    for i, pd in enumerate(doc.get("planks", [])):
        what = f"planks[{i}]"
        if not isinstance(pd, dict) or not {"normal", "lo", "hi"} <= set(pd):
            raise DocumentError(f"{what}: expected normal, lo and hi")
        try:
            normal = Direction(_vector(pd["normal"], backend, what, dim), backend)
            planks.append(Plank(normal, _scalar(pd["lo"], backend, what), _scalar(pd["hi"], backend, what)))
        except ValueError as exc:
            raise DocumentError(f"{what}: {exc}") from exc
    label = doc.get("label", "")
    return Scene(body, planks, label if isinstance(label, str) else "")


def parse_scene(text: str, backend: Backend) -> Scene:
    return scene_from_dict(_load(text), backend)


def _witness_dict(w: DilationWitness | None):
    if w is None:
        return None
    return {
        "h1": _hs(w.h1),
        "h2": _hs(w.h2),
        "p": _vec(w.p),
        "rho": format_scalar(w.rho),
        "containment_margin": format_scalar(w.containment_margin),
    }


def _table(d):
    return {str(k): format_scalar(v) for k, v in sorted(d.items())}


def certificate_to_dict(cert: Certificate, scene: Scene) -> dict:
    return {
        "version": VERSION,
        "backend": cert.backend,
        "tolerance": cert.tolerance,
        "scene_digest": scene_digest(scene),
        "order": list(cert.order),
        "sample_seed": cert.sample_seed,
        "sample_directions": [_vec(d) for d in cert.sample_directions],
        "steps": [
            {
                "plank_index": s.plank_index,
                "empty": s.empty,
                "rho": format_scalar(s.rho),
                "ratio": format_scalar(s.ratio),
                "body_before": [_hs(h) for h in s.body_before.halfspaces],
                "body_after": [_hs(h) for h in s.body_after.halfspaces],
                "widths_before": _table(s.widths_before),
                "widths_after": _table(s.widths_after),
                "samples_before": _vec(s.samples_before),
                "samples_after": _vec(s.samples_after),
                "dilation": _witness_dict(s.dilation),
            }
            for s in cert.steps
        ],
        "bang_sum": format_scalar(cert.bang_sum),
        "chain_bound": format_scalar(cert.chain_bound),
        "verified": cert.verified,
    }


def emit_certificate(cert: Certificate, scene: Scene) -> str:
    return _dumps(certificate_to_dict(cert, scene))


def _int(x, what):
    if not isinstance(x, int) or isinstance(x, bool):
        raise DocumentError(f"{what}: expected an integer")
    return x


def certificate_from_dict(doc, backend: Backend, dim: int) -> tuple[Certificate, str]:
    """Parse a certificate; returns it with the scene digest it claims."""
    if not isinstance(doc, dict) or doc.get("version") != VERSION:
        raise DocumentError("unsupported or missing certificate version")
    try:
        steps = []
        for i, sd in enumerate(doc["steps"]):
            what = f"steps[{i}]"
            wd = sd["dilation"]
            witness = None
            if wd is not None:
                witness = DilationWitness(
                    _halfspace(wd["h1"], backend, dim, what + ".h1"),
                    _halfspace(wd["h2"], backend, dim, what + ".h2"),
                    _vector(wd["p"], backend, what + ".p", dim),
                    _scalar(wd["rho"], backend, what),
                    _scalar(wd["containment_margin"], backend, what),
                )
            steps.append(
                PeelStep(
                    plank_index=_int(sd["plank_index"], what),
                    body_before=_body(sd["body_before"], backend, dim, what + ".body_before"),
                    body_after=_body(sd["body_after"], backend, dim, what + ".body_after"),
                    empty=bool(sd["empty"]),
                    rho=_scalar(sd["rho"], backend, what),
                    ratio=_scalar(sd["ratio"], backend, what),
                    widths_before={int(k): _scalar(v, backend, what) for k, v in sd["widths_before"].items()},
                    widths_after={int(k): _scalar(v, backend, what) for k, v in sd["widths_after"].items()},
                    samples_before=_vector(sd["samples_before"], backend, what),
                    samples_after=_vector(sd["samples_after"], backend, what),
                    dilation=witness,
                )
            )
        cert = Certificate(
            order=tuple(_int(i, "order") for i in doc["order"]),
            steps=steps,
            bang_sum=_scalar(doc["bang_sum"], backend, "bang_sum"),
            chain_bound=_scalar(doc["chain_bound"], backend, "chain_bound"),
            verified=doc["verified"] is True,
            backend=str(doc["backend"]),
            tolerance=doc["tolerance"],
            sample_seed=_int(doc["sample_seed"], "sample_seed"),
            sample_directions=tuple(_vector(d, backend, "sample_directions", dim) for d in doc["sample_directions"]),
        )
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(f"malformed certificate: {exc!r}") from exc
    return cert, str(doc.get("scene_digest", ""))


def parse_certificate(text: str, backend: Backend, dim: int) -> tuple[Certificate, str]:
    return certificate_from_dict(_load(text), backend, dim)


def verify_certificate_document(text: str, scene: Scene) -> Verification:
    """Parse a certificate file and verify it against ``scene``."""
    cert, digest = parse_certificate(text, scene.backend, scene.dim)
    result = verify_certificate(cert, scene.body, scene.planks)
    if digest != scene_digest(scene):
        return Verification(False, ("scene_digest: certificate was issued for a different scene",) + result.diagnostics)
    return result
