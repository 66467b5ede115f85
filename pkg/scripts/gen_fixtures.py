"""Regenerate the bundled code fixtures under src/qdistcert/fixtures."""
import json
from pathlib import Path

from qdistcert.code import BbSpec, CssCode
from qdistcert.gf2 import Gf2Matrix

OUT = Path(__file__).resolve().parent.parent / "src" / "qdistcert" / "fixtures"


def write(name, obj):
    (OUT / f"{name}.json").write_text(json.dumps(obj, indent=1) + "\n")


def steane():
    h = Gf2Matrix.from_rows(["1001011", "0101101", "0010111"])
    ker = Gf2Matrix.from_rows(["1101000", "0110100", "1010010", "1110001"])
    return CssCode("steane", h, h, ker, ker, claimed=(1, 3))


def shor():
    hz = Gf2Matrix.from_rows([
        "110000000", "011000000", "000110000", "000011000", "000000110", "000000011"])
    hx = Gf2Matrix.from_rows(["111111000", "000111111"])
    gx = Gf2Matrix.from_rows([
        "110000000", "101000000", "000110000", "000101000",
        "100100100", "100100010", "100100001"])
    gz = Gf2Matrix.from_rows(["111000000", "000111000", "000000111"])
    return CssCode("shor", hx, hz, gx, gz, claimed=(1, 3))


def golay():
    # cyclic [23,12,7] Golay code from g(x) = 1 + x^2 + x^4 + x^5 + x^6 + x^10 + x^11;
    # its dual is contained in it, so H = generator of the dual gives a weakly self-dual CSS code
    g = sum(1 << e for e in (0, 2, 4, 5, 6, 10, 11))
    gen = Gf2Matrix(12, 23, tuple(g << s for s in range(12)))
    h = gen.kernel_basis()
    return CssCode("golay", h, h, gen, gen, claimed=(1, 7))


def single_z():
    return CssCode("single_z", Gf2Matrix.zeros(0, 1), Gf2Matrix.from_rows(["1"]), claimed=(0, 2))


BB = [
    BbSpec(6, 6, ((3, 0), (0, 1), (0, 2)), ((0, 3), (1, 0), (2, 0)), "bb72", (12, 6)),
    BbSpec(15, 3, ((9, 0), (0, 1), (0, 2)), ((0, 0), (2, 0), (7, 0)), "bb90", (8, 10)),
    BbSpec(9, 6, ((3, 0), (0, 1), (0, 2)), ((0, 3), (1, 0), (2, 0)), "bb108", (8, 10)),
    BbSpec(12, 6, ((3, 0), (0, 1), (0, 2)), ((0, 3), (1, 0), (2, 0)), "bb144", (12, 12)),
    BbSpec(12, 12, ((3, 0), (0, 2), (0, 7)), ((0, 3), (1, 0), (2, 0)), "bb288", (12, 18)),
]

if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    for code in (steane(), shor(), golay(), single_z()):
        write(code.name, code.to_json(readable=True))
    for spec in BB:
        write(spec.name, spec.to_json())
