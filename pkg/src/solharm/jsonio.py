"""JSON and CSV wire formats.

All file I/O is UTF-8 JSON or RFC-4180 CSV.  Parsers track a JSON-pointer
location so malformed input is reported with the exact path of the offending
value.  Encoders emit keys in a fixed order and rely on repr-shortest float
serialization, so equal inputs produce byte-identical files.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from .characters import ProductCharacter, SolenoidCharacter
from .errors import SpecParseError
from .funcspace import LimitPeriodicSeries, SolenoidPoly, SolenoidTerm
from .fourier import Spectrum
from .profinite import ModulusTower, ProfiniteInt, embed_int
from .rationals import RationalAngle


def _expect(obj, types, ptr, what):
    if not isinstance(obj, types) or isinstance(obj, bool):
        raise SpecParseError(f"expected {what}, got {type(obj).__name__}", ptr)
    return obj


def _expect_dict(obj, ptr) -> dict:
    return _expect(obj, dict, ptr, "object")


def _expect_list(obj, ptr) -> list:
    return _expect(obj, list, ptr, "array")


def _expect_int(obj, ptr) -> int:
    return _expect(obj, int, ptr, "integer")


def _expect_number(obj, ptr) -> float:
    return float(_expect(obj, (int, float), ptr, "number"))


def _get(obj: dict, key: str, ptr: str):
    if key not in obj:
        raise SpecParseError(f"missing key {key!r}", ptr)
    return obj[key], f"{ptr}/{key}"


# ---------------------------------------------------------------- rationals

def rational_to_json(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def parse_rational(obj: Any, ptr: str = "") -> Fraction:
    d = _expect_dict(obj, ptr)
    num, nptr = _get(d, "num", ptr)
    den, dptr = _get(d, "den", ptr)
    num = _expect_int(num, nptr)
    den = _expect_int(den, dptr)
    if den == 0:
        raise SpecParseError("zero denominator", dptr)
    return Fraction(num, den)


def angle_to_json(angle: RationalAngle) -> dict:
    return {"a": angle.a, "b": angle.b}


def parse_angle(obj: Any, ptr: str = "") -> RationalAngle:
    d = _expect_dict(obj, ptr)
    a, aptr = _get(d, "a", ptr)
    b, bptr = _get(d, "b", ptr)
    a = _expect_int(a, aptr)
    b = _expect_int(b, bptr)
    if b == 0:
        raise SpecParseError("zero denominator", bptr)
    return RationalAngle(a, b)


# ---------------------------------------------------------------- profinite

def profinite_to_json(t: ProfiniteInt) -> dict:
    if t.integer is not None:
        return {"int": t.integer}
    return {"moduli": list(t.tower.levels), "residues": list(t.residues)}


def parse_profinite(obj: Any, ptr: str = "", tower: ModulusTower | None = None) -> ProfiniteInt:
    d = _expect_dict(obj, ptr)
    if "int" in d:
        n = _expect_int(d["int"], f"{ptr}/int")
        return embed_int(n, tower)
    moduli, mptr = _get(d, "moduli", ptr)
    residues, rptr = _get(d, "residues", ptr)
    moduli = [_expect_int(m, f"{mptr}/{i}") for i, m in enumerate(_expect_list(moduli, mptr))]
    residues = [
        _expect_int(r, f"{rptr}/{i}") for i, r in enumerate(_expect_list(residues, rptr))
    ]
    try:
        return ProfiniteInt(ModulusTower(tuple(moduli)), tuple(residues))
    except Exception as exc:
        raise SpecParseError(str(exc), ptr) from exc


# --------------------------------------------------------------- characters

def product_character_to_json(c: ProductCharacter) -> dict:
    return {"lambda": rational_to_json(c.freq), "rho": angle_to_json(c.angle)}


def parse_product_character(obj: Any, ptr: str = "") -> ProductCharacter:
    d = _expect_dict(obj, ptr)
    lam, lptr = _get(d, "lambda", ptr)
    rho, rptr = _get(d, "rho", ptr)
    return ProductCharacter(parse_rational(lam, lptr), parse_angle(rho, rptr))


def solenoid_character_to_json(c: SolenoidCharacter) -> dict:
    return {"q": rational_to_json(c.q)}


def parse_solenoid_character(obj: Any, ptr: str = "") -> SolenoidCharacter:
    d = _expect_dict(obj, ptr)
    q, qptr = _get(d, "q", ptr)
    return SolenoidCharacter(parse_rational(q, qptr))


# ----------------------------------------------------------- function specs

def _complex_to_json(z: complex) -> dict:
    return {"re": float(z.real), "im": float(z.imag)}


def _parse_complex(obj: Any, ptr: str) -> complex:
    d = _expect_dict(obj, ptr)
    re, rptr = _get(d, "re", ptr)
    im, iptr = _get(d, "im", ptr)
    return complex(_expect_number(re, rptr), _expect_number(im, iptr))


@dataclass
class FunctionSpec:
    """A parsed function file: product-character terms in file order.

    Terms are (coefficient, character) pairs; a term may carry an explicit
    angle that differs from the fractional part of its frequency ("rho"
    override), in which case the function does not descend to the quotient
    and only the invariance diagnostics apply.  With a majorant the file
    describes the leading terms of a uniformly convergent series (each
    bound must dominate its coefficient); partial sums then follow the file
    order and carry the majorant tail as an error bound.
    """

    raw_terms: tuple[tuple[complex, ProductCharacter], ...]
    majorant: tuple[float, ...] | None

    @property
    def descends_all(self) -> bool:
        from .characters import descends

        return all(descends(ch) for _, ch in self.raw_terms)

    @property
    def poly(self) -> SolenoidPoly:
        from .errors import DomainError

        if not self.descends_all:
            raise DomainError(
                "function spec contains a non-descending term; "
                "it is not invariant under the integer action"
            )
        return SolenoidPoly((c, ch.freq) for c, ch in self.raw_terms)

    @property
    def product_poly(self):
        from .funcspace import ProductPoly

        return ProductPoly(self.raw_terms)

    @property
    def is_series(self) -> bool:
        return self.majorant is not None

    def truncate(self, n: int) -> SolenoidPoly:
        if not self.descends_all:
            from .errors import DomainError

            raise DomainError("cannot truncate a non-descending spec")
        return SolenoidPoly((c, ch.freq) for c, ch in self.raw_terms[:n])

    def tail_bound(self, n: int) -> float | None:
        if self.majorant is None:
            return None
        return float(math.fsum(self.majorant[n:]))


def parse_function_spec(obj: Any, ptr: str = "") -> FunctionSpec:
    from .rationals import frac_angle

    d = _expect_dict(obj, ptr)
    raw_terms, tptr = _get(d, "terms", ptr)
    raw_terms = _expect_list(raw_terms, tptr)
    terms = []
    for i, raw in enumerate(raw_terms):
        iptr = f"{tptr}/{i}"
        term = _expect_dict(raw, iptr)
        coeff, cptr = _get(term, "coeff", iptr)
        q, qptr = _get(term, "q", iptr)
        freq = parse_rational(q, qptr)
        angle = frac_angle(freq)
        if "rho" in term:
            angle = parse_angle(term["rho"], f"{iptr}/rho")
        terms.append((_parse_complex(coeff, cptr), ProductCharacter(freq, angle)))
    majorant = None
    if "majorant" in d:
        mptr = f"{ptr}/majorant"
        raw_m = _expect_list(d["majorant"], mptr)
        majorant = tuple(_expect_number(b, f"{mptr}/{i}") for i, b in enumerate(raw_m))
        if len(majorant) < len(terms):
            raise SpecParseError(
                f"majorant has {len(majorant)} entries for {len(terms)} terms", mptr
            )
        for i, ((coeff, _), bound) in enumerate(zip(terms, majorant)):
            if bound < 0:
                raise SpecParseError("majorant entries must be nonnegative", f"{mptr}/{i}")
            if abs(coeff) > bound * (1 + 1e-12):
                raise SpecParseError(
                    f"majorant {bound} does not dominate |coeff| = {abs(coeff)}",
                    f"{mptr}/{i}",
                )
    return FunctionSpec(tuple(terms), majorant)


def function_spec_to_json(spec: FunctionSpec | SolenoidPoly) -> dict:
    from .rationals import frac_angle

    if isinstance(spec, SolenoidPoly):
        spec = FunctionSpec(
            tuple((t.coeff, t.char.as_product()) for t in spec.terms), None
        )
    terms = []
    for coeff, ch in spec.raw_terms:
        entry: dict[str, Any] = {
            "coeff": _complex_to_json(coeff),
            "q": rational_to_json(ch.freq),
        }
        if ch.angle != frac_angle(ch.freq):
            entry["rho"] = angle_to_json(ch.angle)
        terms.append(entry)
    out: dict[str, Any] = {"terms": terms}
    if spec.majorant is not None:
        out["majorant"] = list(spec.majorant)
    return out


def series_from_spec(spec: FunctionSpec) -> LimitPeriodicSeries:
    """View a majorant-carrying spec as a series (finite tail beyond the file)."""
    if spec.majorant is None:
        raise SpecParseError("function spec has no majorant", "/majorant")
    if not spec.descends_all:
        raise SpecParseError("series terms must descend", "/terms")
    terms = [SolenoidTerm(c, SolenoidCharacter(ch.freq)) for c, ch in spec.raw_terms]

    def term_fn(k: int) -> SolenoidTerm:
        if k <= len(terms):
            return terms[k - 1]
        return SolenoidTerm(0.0 + 0.0j, SolenoidCharacter(Fraction(0)))

    def majorant_fn(k: int) -> float:
        return spec.majorant[k - 1] if k <= len(spec.majorant) else 0.0

    return LimitPeriodicSeries(term_fn, majorant_fn)


# ----------------------------------------------------------------- spectra

def spectrum_to_json(spec: Spectrum) -> dict:
    return {
        "entries": [
            {"q": rational_to_json(char.q), "coeff": _complex_to_json(coeff)}
            for char, coeff in spec.sorted_terms()
        ],
        "residual_power": float(spec.residual_power),
    }


def parse_spectrum(obj: Any, ptr: str = "") -> Spectrum:
    d = _expect_dict(obj, ptr)
    raw_entries, eptr = _get(d, "entries", ptr)
    entries = {}
    for i, raw in enumerate(_expect_list(raw_entries, eptr)):
        iptr = f"{eptr}/{i}"
        e = _expect_dict(raw, iptr)
        q, qptr = _get(e, "q", iptr)
        coeff, cptr = _get(e, "coeff", iptr)
        entries[SolenoidCharacter(parse_rational(q, qptr))] = _parse_complex(coeff, cptr)
    residual = 0.0
    if "residual_power" in d:
        residual = _expect_number(d["residual_power"], f"{ptr}/residual_power")
    return Spectrum(entries, residual)


def spectrum_csv_rows(spec: Spectrum) -> list[list]:
    """Rows q_num, q_den, coeff_re, coeff_im, abs in the deterministic order."""
    rows = [["q_num", "q_den", "coeff_re", "coeff_im", "abs"]]
    for char, coeff in spec.sorted_terms():
        rows.append(
            [char.q.numerator, char.q.denominator, coeff.real, coeff.imag, abs(coeff)]
        )
    return rows


# ------------------------------------------------------------ mean estimates

def mean_estimate_to_json(est) -> dict:
    return {
        "scheme": est.scheme,
        "T": est.horizon,
        "value": _complex_to_json(est.value),
        "error_bound": est.error_bound,
    }


def mean_csv_rows(estimates) -> list[list]:
    """Mean-value rows with columns scheme, T, value_re, value_im, error_bound."""
    rows = [["scheme", "T", "value_re", "value_im", "error_bound"]]
    for est in estimates:
        rows.append(
            [
                est.scheme,
                "" if est.horizon is None else est.horizon,
                est.value.real,
                est.value.imag,
                "" if est.error_bound is None else est.error_bound,
            ]
        )
    return rows


# ------------------------------------------------------------------- files

def load_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON: {exc}", "/") from exc
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc}", "/") from exc


def dumps_json(obj: Any) -> str:
    return json.dumps(obj, indent=2) + "\n"
