"""Reading and writing ``.cplx`` facet files and ``.map`` JSON documents."""
from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .complex import ParseError, SimplicialComplex, SimplicialMap, make_map, parse_complex


def read_complex(path: str | Path) -> SimplicialComplex:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    try:
        return parse_complex(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def write_complex(K: SimplicialComplex, path: str | Path) -> None:
    Path(path).write_text(K.to_text(), encoding="utf-8")


def load_map_document(path: str | Path) -> dict:
    path = Path(path)
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from exc
    if not isinstance(doc, dict) or not {"domain", "codomain", "assignment"} <= doc.keys():
        raise ParseError(f"{path}: a map needs 'domain', 'codomain' and 'assignment'")
    if not isinstance(doc["assignment"], dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in doc["assignment"].items()
    ):
        raise ParseError(f"{path}: 'assignment' must map vertex names to vertex names")
    return doc


def map_sources(path: str | Path) -> tuple[Path, Path]:
    """Domain and codomain paths of a map file, resolved against the map's directory."""
    path = Path(path)
    doc = load_map_document(path)
    return path.parent / doc["domain"], path.parent / doc["codomain"]


def read_map(path: str | Path) -> SimplicialMap:
    """Load a map; ``domain``/``codomain`` paths are relative to the map file."""
    path = Path(path)
    doc = load_map_document(path)
    dom = read_complex(path.parent / doc["domain"])
    cod = read_complex(path.parent / doc["codomain"])
    return make_map(dom, cod, doc["assignment"])


def map_document(f: SimplicialMap, domain: str, codomain: str) -> dict:
    return {"domain": domain, "codomain": codomain, "assignment": dict(sorted(f.as_names().items()))}


def map_text(f: SimplicialMap, domain: str, codomain: str) -> str:
    return json.dumps(map_document(f, domain, codomain), indent=2, sort_keys=True) + "\n"


def content_hash(path: str | Path) -> str:
    return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()
