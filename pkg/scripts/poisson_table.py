"""Generalized-Poisson versus Nambu-Poisson verdicts for a few multivectors."""

import argparse
from dataclasses import dataclass

from liecoh.algebras import build_algebra
from liecoh.multibrackets import extract_structure
from liecoh.poisson import Multivector, gps_check, higher_poisson, lie_poisson, np_check
from liecoh.tensor import AltTensor


@dataclass
class Config:
    show_witness: bool = False


def cases():
    su2, su3 = build_algebra("A1"), build_algebra("A2")
    yield "su(2) Lie-Poisson", lie_poisson(su2)
    yield "su(3) Lie-Poisson", lie_poisson(su3)
    yield "su(3) linear 4-vector", higher_poisson(extract_structure(su3, 4))
    yield "constant d0^d1^d2 (dim 4)", Multivector.constant(AltTensor.basis((0, 1, 2), 4))
    yield "constant d0^d1 + d2^d3", Multivector.constant(
        AltTensor.basis((0, 1), 4) + AltTensor.basis((2, 3), 4))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--show-witness", action="store_true")
    cfg = Config(ap.parse_args().show_witness)
    print(f"{'multivector':28s} {'GPS':8s} {'NP diff':8s} {'NP alg':8s}")
    for name, Lam in cases():
        gps = "n/a" if Lam.degree % 2 else ("0" if gps_check(Lam).zero else "nonzero")
        np = np_check(Lam)
        d = "0" if np.differential_zero else "nonzero"
        a = "0" if not np.algebraic_sample else "nonzero"
        print(f"{name:28s} {gps:8s} {d:8s} {a:8s}")
        if cfg.show_witness and not np.zero:
            print("   ", np.to_json().get("differential_witness"), np.to_json().get("algebraic_witness"))


if __name__ == "__main__":
    main()
