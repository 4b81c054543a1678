"""JSON loaders for posets, nets, morphisms and graded elements.

Relative file names are tried as given, then next to the referring file,
then among the bundled fixtures, so ``crown2.json`` works from anywhere.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import InputError
from .graded_algebra import GradedElement
from .net_algebras import NetMorphism
from .net_hilbert import TruncatedNet
from .operators import BasisPartialMap, OperatorSum
from .paths import parse_path
from .poset import Poset


def fixtures_dir() -> Path:
    return Path(str(resources.files("gradednets") / "fixtures"))


def fixture_names() -> list[str]:
    return sorted(p.name for p in fixtures_dir().glob("*.json"))


def resolve(name: str | Path, relative_to: Path | None = None) -> Path:
    p = Path(name)
    candidates = [p]
    if relative_to is not None and not p.is_absolute():
        candidates.append(relative_to.parent / p)
    candidates.append(fixtures_dir() / p.name)
    for c in candidates:
        if c.is_file():
            return c
    raise InputError(f"file not found: {name}")


def read_json(path: Path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc})") from None
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    return data


def digest(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def poset_from_dict(data: dict) -> Poset:
    try:
        elements = data["elements"]
        pairs = [tuple(p) for p in data.get("leq", [])]
    except (KeyError, TypeError) as exc:
        raise InputError(f"poset JSON needs 'elements' and 'leq': {exc}") from None
    if any(len(p) != 2 for p in pairs):
        raise InputError("every 'leq' entry must be a pair")
    return Poset(elements, pairs)


def load_poset(name) -> tuple[Poset, list[Path]]:
    path = resolve(name)
    return poset_from_dict(read_json(path)), [path]


def net_from_dict(data: dict, poset: Poset) -> TruncatedNet:
    gamma = {}
    for key, img in data.get("gamma", {}).items():
        if "<=" not in key:
            raise InputError(f"gamma key {key!r} must look like 'a<=b'")
        a, b = (s.strip() for s in key.split("<=", 1))
        gamma[(a, b)] = img
    if "L" not in data:
        raise InputError("net JSON needs 'L'")
    dims = data.get("dims", {})
    return TruncatedNet(poset, dims, gamma, int(data["L"]))


def load_net(name) -> tuple[TruncatedNet, list[Path]]:
    path = resolve(name)
    data = read_json(path)
    if "poset" not in data:
        raise InputError(f"{path}: net JSON needs 'poset'")
    if isinstance(data["poset"], dict):
        P, used = poset_from_dict(data["poset"]), []
    else:
        ppath = resolve(data["poset"], path)
        P, used = poset_from_dict(read_json(ppath)), [ppath]
    return net_from_dict(data, P), [path] + used


def load_morphism(name, src: TruncatedNet, dst: TruncatedNet) -> tuple[NetMorphism, list[Path]]:
    path = resolve(name)
    data = read_json(path)
    if "phi" not in data or "Phi" not in data:
        raise InputError(f"{path}: morphism JSON needs 'phi' and 'Phi'")
    return NetMorphism(src, dst, dict(data["phi"]), dict(data["Phi"])), [path]


def element_from_dict(data: dict, net: TruncatedNet, base=None) -> GradedElement:
    P = net.poset
    base = data.get("base", base)
    if base is None:
        raise InputError("graded element needs a basepoint")
    P.check(base)
    op = OperatorSum.zero(P)
    for word, terms in data.get("parts", {}).items():
        tag = parse_path(P, word)
        if not tag.is_loop or tag.start != base:
            raise InputError(f"degree {word!r} is not a loop at {base!r}")
        for t in terms:
            pairs = {int(i): int(j) for i, j in t["map"]}
            if any(not 0 <= k < net.dims[base] for kv in pairs.items() for k in kv):
                raise InputError(f"term {t['map']} leaves H_{base}")
            if len(set(pairs.values())) != len(pairs):
                raise InputError(f"term {t['map']} is not injective")
            m = BasisPartialMap.build(P, base, base, pairs, tag)
            op = op + OperatorSum.of(m, Fraction(str(t.get("coeff", 1))))
    return GradedElement(net, base, OperatorSum(op.blocks, P))


def element_to_dict(x: GradedElement) -> dict:
    parts = {}
    for (src, dst, tag), entries in sorted(x.op.blocks.items(), key=lambda kv: str(kv[0][2])):
        parts[str(tag)] = [{"map": [[i, j]], "coeff": str(c)} for (i, j), c in sorted(entries.items())]
    return {"base": str(x.base), "parts": parts}


def load_element(name, net: TruncatedNet, base=None) -> tuple[GradedElement, list[Path]]:
    path = resolve(name)
    return element_from_dict(read_json(path), net, base), [path]
