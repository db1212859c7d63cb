"""Complete BRST operator s_2 + s_4 + ... for one algebra, with anticommutator table."""

import argparse
import json
import time
from dataclasses import dataclass

from liecoh.algebras import build_algebra, catalog
from liecoh.brst import complete_brst
from liecoh.multibrackets import extract_structure


@dataclass
class Config:
    label: str = "A3"
    exhaustive: bool = None
    per_degree: int = 40


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("label", nargs="?", default=Config.label)
    ap.add_argument("--exhaustive", action="store_true", default=None)
    ap.add_argument("--per-degree", type=int, default=Config.per_degree)
    ns = ap.parse_args()
    cfg = Config(ns.label, ns.exhaustive, ns.per_degree)
    g = build_algebra(cfg.label)
    t0 = time.perf_counter()
    orders = sorted({q - 1 for q in catalog(cfg.label).cocycle_orders if q > 3})
    structures = [st for st in (extract_structure(g, n) for n in orders) if not st.is_empty()]
    t1 = time.perf_counter()
    _, rep = complete_brst(g, structures, exhaustive=cfg.exhaustive, per_degree=cfg.per_degree)
    t2 = time.perf_counter()
    print(json.dumps(rep.to_json(), indent=2, sort_keys=True))
    print(f"extraction {t1 - t0:.1f}s, checks {t2 - t1:.1f}s")


if __name__ == "__main__":
    main()
