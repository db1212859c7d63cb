"""Betti numbers of small algebras next to the catalog Poincare coefficients."""

import argparse
import time
from dataclasses import dataclass

from liecoh.algebras import build_algebra, catalog, poincare_polynomial
from liecoh.cohomology import cohomology
from liecoh.errors import NotSimpleError


@dataclass
class Config:
    labels: tuple = ("A1", "A2", "B2", "heisenberg", "abelian:4")
    allow_modular: bool = False


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("labels", nargs="*", default=list(Config.labels))
    ap.add_argument("--allow-modular", action="store_true")
    ns = ap.parse_args()
    cfg = Config(tuple(ns.labels), ns.allow_modular)
    for label in cfg.labels:
        t0 = time.perf_counter()
        rep = cohomology(build_algebra(label), allow_modular=cfg.allow_modular)
        try:
            expected = poincare_polynomial(catalog(label))
        except NotSimpleError:
            expected = None
        mark = "" if expected is None else ("  ok" if expected == rep.betti else "  MISMATCH")
        print(f"{label:12s} {rep.betti}  [{rep.method}, {time.perf_counter() - t0:.2f}s]{mark}")


if __name__ == "__main__":
    main()
