"""Static checks of species and Hamiltonian parameter files.

Nothing here runs a computation: each file is parsed, classified by its keys
and compared against the expected key set and the shipped schema.
"""
from __future__ import annotations

import difflib
from dataclasses import asdict, dataclass

import jsonschema

from qls.crystal import SPECIES_KEYS
from qls.hyperfine import OPTIONAL_PARAM_KEYS, PARAM_KEYS
from qls.io import InputError, load_schema, read_json_object

__all__ = ["ValidationIssue", "validate_inputs", "validate_object"]

# unit-free stem of every known key
_STEMS = {
    "name": "name",
    "mass_u": "mass",
    "charge_e": "charge",
    "lambda_nm": "lambda",
    "gamma_2pi_MHz": "gamma_2pi",
    "B_e_cm1": "B_e",
    "D_e_cm1": "D_e",
    "gamma_MHz": "gamma",
    "gamma_N_MHz": "gamma_N",
    "bF_MHz": "bF",
    "cdip_MHz": "cdip",
    "cI_MHz": "cI",
    "eqQ_MHz": "eqQ",
    "g": "g",
    "I1_twice": "I1",
    "muB_MHz_per_T": "muB",
}
_UNIT_TOKENS = {
    "Hz", "kHz", "MHz", "GHz", "THz", "cm1", "cm", "invcm", "m", "nm", "um", "mm",
    "u", "amu", "kg", "g", "e", "C", "T", "mT", "G", "s", "ms", "us", "rad", "twice", "J",
    "MHz_per_T", "Hz_per_T", "per_T",
}

_FORMATS = {
    "species": {"required": ("name", "mass_u", "charge_e"), "optional": ("lambda_nm", "gamma_2pi_MHz"),
                "schema": "species"},
    "hamiltonian": {"required": PARAM_KEYS, "optional": OPTIONAL_PARAM_KEYS, "schema": "hamiltonian"},
}
_SPECIES_ONLY = set(SPECIES_KEYS)


@dataclass(frozen=True)
class ValidationIssue:
    file: str
    kind: str  # unreadable | missing | extra | misspelled | unit-suffix | type | range | unknown-format
    message: str
    key: str | None = None

    def as_dict(self) -> dict:
        return asdict(self)

    def __str__(self) -> str:
        return f"{self.file}: {self.message}"


def _unit_variant(key: str, expected: str) -> bool:
    """``key`` names the same quantity as ``expected`` with another or no unit suffix."""
    stem = _STEMS[expected]
    if key == expected:
        return False
    if key == stem:
        return True
    return key.startswith(stem + "_") and key[len(stem) + 1:] in _UNIT_TOKENS


def _classify(keys) -> str | None:
    ks = set(keys)
    if ks & _SPECIES_ONLY or any(_unit_variant(k, e) for k in ks for e in _FORMATS["species"]["required"]):
        return "species"
    scores = {}
    for fmt, spec in _FORMATS.items():
        known = (*spec["required"], *spec["optional"])
        scores[fmt] = sum(1 for k in ks if k in known or any(_unit_variant(k, e) for e in known))
    best = max(scores, key=scores.get)
    return best if scores[best] else None


def validate_object(raw: dict, source: str = "<dict>", allow_unknown: bool = False) -> list[ValidationIssue]:
    """Issues for one parsed file, in a stable order."""
    fmt = _classify(raw)
    if fmt is None:
        return [ValidationIssue(source, "unknown-format",
                                f"{source}: keys match neither a species nor a Hamiltonian parameter file")]
    spec = _FORMATS[fmt]
    known = (*spec["required"], *spec["optional"])
    missing = [k for k in spec["required"] if k not in raw]
    extra = [k for k in raw if k not in known]
    issues = []

    for k in list(extra):
        target = next((e for e in known if e not in raw and _unit_variant(k, e)), None)
        if target is not None:
            issues.append(ValidationIssue(source, "unit-suffix",
                                          f"{source}: key {k!r} should be {target!r} (unit suffix)", k))
        else:
            pool = [e for e in known if e not in raw]
            close = difflib.get_close_matches(k, pool, n=1, cutoff=0.75)
            if not close:
                continue
            target = close[0]
            issues.append(ValidationIssue(source, "misspelled",
                                          f"{source}: unknown key {k!r}; did you mean {target!r}?", k))
        extra.remove(k)
        if target in missing:
            missing.remove(target)
    for k in missing:
        issues.append(ValidationIssue(source, "missing", f"{source}: missing key {k!r}", k))
    if not allow_unknown:
        for k in extra:
            issues.append(ValidationIssue(source, "extra", f"{source}: unknown key {k!r}", k))

    # types and ranges from the schema, on the recognized keys only
    present = {k: v for k, v in raw.items() if k in known}
    schema = dict(load_schema(spec["schema"]))
    schema.pop("required", None)
    seen = set()
    errs = jsonschema.Draft202012Validator(schema).iter_errors(present)
    # one issue per key; a wrong type makes any range complaint moot
    for err in sorted(errs, key=lambda e: ([str(p) for p in e.path], e.validator != "type")):
        key = str(err.path[0]) if err.path else None
        if key is not None and key in seen:
            continue
        seen.add(key)
        kind = "type" if err.validator == "type" else "range"
        what = f"key {key!r}" if key else "file"
        issues.append(ValidationIssue(source, kind, f"{source}: {what}: {err.message}", key))
    return issues


def validate_inputs(paths, allow_unknown: bool = False) -> dict:
    """Report ``{"files": [...], "errors": [...]}``; never raises on bad input."""
    errors = []
    files = []
    for path in paths:
        src = str(path)
        files.append(src)
        try:
            raw = read_json_object(path)
        except InputError as exc:
            errors.append(ValidationIssue(src, "unreadable", str(exc)))
            continue
        errors.extend(validate_object(raw, src, allow_unknown))
    return {"files": files, "errors": [e.as_dict() for e in errors]}
