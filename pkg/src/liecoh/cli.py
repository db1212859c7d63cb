"""Command-line front end: every check is a subcommand printing a JSON report.

Exit codes: 0 when every identity holds, 1 when one is falsified (the report
carries a witness), 2 on usage errors.
"""

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .algebras import build_algebra, catalog, expected_dim, parse_label, poincare_polynomial
from .brst import brst_rho, brst_trivial, complete_brst, nilpotency_check
from .cohomology import (
    Coboundary,
    Cochain,
    Representation,
    cocycle_from_polynomial,
    cohomology,
    first_nonzero,
    relative_cohomology,
    square_residual,
    whitehead_homotopy_check,
)
from .errors import (
    AnticommutatorError,
    LiecohError,
    NotACocycleError,
    NotInvariantError,
    StructureError,
)
from .invariants import check_invariance, dd_polynomial, is_primitive, standard_invariants, symmetrized_trace
from .multibrackets import cocycle_ratio, extract_structure, from_cocycle, gji_check, proportionality_witness
from .poisson import (
    Multivector,
    default_sample,
    fi_residual,
    gps_check,
    higher_poisson,
    lie_poisson,
    np_check,
    PolyFunction,
)
from .scalar import Scalar
from .tensor import AltTensor, sort_with_parity

SCHEMA = 1
FALSIFIED = (NotACocycleError, NotInvariantError, AnticommutatorError, StructureError)


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    algebra: str = None
    options: dict = field(default_factory=dict)
    mutations: list = field(default_factory=list)
    output: str = None
    fmt: str = "json"
    timings: bool = False

    def echo(self):
        doc = {"command": self.command, "options": self.options}
        if self.algebra is not None:
            doc["algebra"] = self.algebra
        if self.mutations:
            doc["mutate"] = [m["text"] for m in self.mutations]
        return doc


@dataclass
class Report:
    config: RunConfig
    verdicts: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    result: dict = field(default_factory=dict)
    provenance: str = "exact"
    seconds: float = None

    def verdict(self, name, ok, witness=None, good="zero", bad="nonzero"):
        self.verdicts[name] = good if ok else bad
        if not ok and witness is not None:
            self.witnesses[name] = witness

    @property
    def passed(self):
        return not self.witnesses and all(v in ("zero", "pass") for v in self.verdicts.values())

    def to_json(self):
        doc = dict(self.result)
        doc.update({
            "schema": SCHEMA,
            "tool": "liecoh",
            "version": __version__,
            "config": self.config.echo(),
            "verdicts": self.verdicts,
            "provenance": self.provenance,
            "status": "pass" if self.passed else "falsified",
        })
        if self.witnesses:
            doc["witnesses"] = self.witnesses
        if self.config.timings and self.seconds is not None:
            doc["timings"] = {"seconds": round(self.seconds, 3)}
        return doc


def report_render(report, fmt="json"):
    doc = report.to_json()
    if fmt == "json":
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"
    lines = [f"liecoh {report.config.command}: {doc['status']}"]
    for k, v in sorted(report.verdicts.items()):
        lines.append(f"  {k}: {v}")
        if k in report.witnesses:
            lines.append(f"    witness: {json.dumps(report.witnesses[k], sort_keys=True)}")
    for k, v in sorted(report.result.items()):
        lines.append(f"  {k} = {json.dumps(v, sort_keys=True)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# mutations


def parse_mutation(text):
    try:
        kind, idx, delta = text.split(":")
        idx = tuple(int(t) for t in idx.split(","))
        delta = Scalar.parse(delta.lstrip("+"))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"bad --mutate value {text!r}: {exc}") from None
    if kind == "C":
        if len(idx) != 3:
            raise UsageError("C mutation needs three indices i,j,k")
    elif kind != "Omega":
        raise UsageError(f"unknown mutation target {kind!r} (expected C or Omega)")
    return {"kind": kind, "idx": idx, "delta": delta, "text": text}


def mutate_algebra(g, mutations):
    for m in mutations:
        if m["kind"] == "C":
            i, j, k = m["idx"]
            if i == j or max(m["idx"]) >= g.dim:
                raise UsageError("C mutation indices out of range or repeated")
            g = g.mutated(i, j, k, m["delta"])
    return g


def mutate_tensor(t, mutations):
    for m in mutations:
        if m["kind"] != "Omega":
            continue
        idx = m["idx"]
        if len(idx) != t.degree or max(idx) >= t.dim:
            raise UsageError(f"Omega mutation needs {t.degree} indices below {t.dim}")
        key, sgn = sort_with_parity(idx)
        if not sgn:
            raise UsageError("Omega mutation index has a repeat")
        delta = m["delta"] if sgn > 0 else -m["delta"]
        t = t + AltTensor.basis(key, t.dim, delta)
    return t


def _load(cfg):
    if not cfg.algebra:
        raise UsageError("--algebra is required")
    return mutate_algebra(build_algebra(cfg.algebra), cfg.mutations)


def _closure(report, g):
    res = g.closure_residual()
    if res is not None or g.generators is not None:
        report.verdict("structure_closure", res is None, res)


def _rep(g, name):
    if name in (None, "trivial"):
        return Representation.trivial(g)
    if name == "defining":
        return Representation.defining(g)
    if name == "adjoint":
        return Representation.adjoint(g)
    raise UsageError(f"unknown representation {name!r}")


def _int_list(text):
    if text is None:
        return None
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected a comma-separated integer list, got {text!r}") from None


# ---------------------------------------------------------------------------
# subcommands


def cmd_catalog(cfg, report):
    label = cfg.algebra
    if not label:
        raise UsageError("catalog needs an algebra label")
    entry = catalog(label)
    report.result.update(entry.to_json())
    report.result["poincare_coefficients"] = poincare_polynomial(entry)


def cmd_algebra(cfg, report):
    g = _load(cfg)
    report.result["dim"] = g.dim
    report.result["expected_dim"] = expected_dim(parse_label(cfg.algebra))
    report.verdict("dimension", g.dim == report.result["expected_dim"], {"dim": g.dim}, "pass", "fail")
    _closure(report, g)
    jac = g.jacobi_residual()
    report.verdict("jacobi", jac is None, jac)
    report.result["killing_nondegenerate"] = g.has_invertible_killing()
    if cfg.options.get("show_structure"):
        report.result["structure"] = g.structure_triplets()


def cmd_invariants(cfg, report):
    g = _load(cfg)
    top = cfg.options.get("max_order") or 3
    _closure(report, g)
    polys = standard_invariants(g, top)
    prim = []
    for idx, k in enumerate(polys):
        inv = check_invariance(k, g)
        report.verdict(f"invariance_{k.order}", inv.zero, inv.witness)
        if is_primitive(k, polys[:idx]).primitive:
            prim.append(k.order)
    report.result["orders"] = [k.order for k in polys]
    report.result["nonzero_orders"] = [k.order for k in polys if not k.is_zero()]
    report.result["primitive_orders"] = prim


def _polynomial(g, source, m):
    if source == "dd":
        return dd_polynomial(g)
    if source in (None, "strace"):
        return symmetrized_trace(g, m)
    raise UsageError(f"unknown polynomial source {source!r}")


def cmd_cocycle(cfg, report):
    g = _load(cfg)
    q = cfg.options.get("order") or 3
    if q % 2 == 0 or q < 3:
        raise UsageError("cocycle order must be odd and at least 3")
    source = cfg.options.get("source")
    m = (q + 1) // 2
    k = _polynomial(g, source, m)
    if k.order != m:
        raise UsageError(f"source {source} gives order {k.order}, not {m}")
    _closure(report, g)
    inv = check_invariance(k, g)
    report.verdict("invariance", inv.zero, inv.witness)
    omega = cocycle_from_polynomial(k, g, verify=False)
    omega = mutate_tensor(omega, cfg.mutations)
    ds = Coboundary(g).apply(omega)
    report.verdict("cocycle", ds.is_zero(), first_nonzero(ds))
    if source == "dd":
        # a product of lower invariants yields the zero cocycle
        report.verdict("nonprimitive_vanishes", omega.is_zero(),
                       first_nonzero(Cochain.scalar(omega)), "pass", "fail")
    report.result.update({"order": q, "source": source or "strace", "nnz": omega.nnz(),
                          "identically_zero": omega.is_zero()})
    if cfg.options.get("show_tensor"):
        report.result["tensor"] = omega.to_json()


def cmd_cohomology(cfg, report):
    g = _load(cfg)
    o = cfg.options
    rho = _rep(g, o.get("rep"))
    top = o.get("max_degree")
    _closure(report, g)
    checked, wit = square_residual(g, rho, top)
    report.verdict("s_squared", wit is None, wit)
    rel = _int_list(o.get("relative"))
    if rel:
        rr = relative_cohomology(g, rel, top)
        report.result["betti"] = rr.betti
        report.result["relative"] = rr.to_json()
        report.verdict("subcomplex_closure", rr.closure_verified, None, "pass", "fail")
    else:
        cr = cohomology(g, rho, top, allow_modular=o.get("allow_modular", False))
        report.result["betti"] = cr.betti
        report.result["ranks"] = cr.to_json()
        report.provenance = cr.method
        report.verdict("euler_characteristic", cr.euler_ok(), None, "pass", "fail")
    if o.get("whitehead"):
        verdicts = []
        for q in range(0, (top if top is not None else g.dim) + 1):
            w = whitehead_homotopy_check(g, rho, q)
            verdicts.append(w.to_json())
            report.verdict(f"homotopy_{q}", w.holds, w.witness, "pass", "fail")
        report.result["whitehead"] = verdicts
    expect = _int_list(o.get("expect"))
    if expect is not None:
        got = report.result["betti"]
        ok = got[:len(expect)] == expect
        bad = next((i for i, (a, b) in enumerate(zip(expect, got)) if a != b), None)
        report.verdict("expected_betti", ok, {"degree": bad, "expected": expect, "got": got}, "pass", "fail")


def _hoce(g, q):
    return cocycle_from_polynomial(symmetrized_trace(g, (q + 1) // 2), g)


def cmd_multibracket(cfg, report):
    g = _load(cfg)
    n = cfg.options.get("order") or 4
    _closure(report, g)
    st = extract_structure(g, n)
    report.result["order"] = n
    report.result["checked_tuples"] = st.checked_tuples
    if st.is_empty():
        report.result["note"] = f"empty structure: degree {n + 1} exceeds dim {g.dim}"
        return
    report.result["identity_component"] = "0"
    tensor = mutate_tensor(st.structure, cfg.mutations)
    checks = cfg.options.get("verify") or "gji"
    if "gji" in checks:
        r = gji_check(g, tensor if tensor is not st.structure else st)
        report.result["residual"] = "0" if r.zero else "nonzero"
        report.verdict("gji", r.zero, r.witness)
    mixed = cfg.options.get("mixed")
    if mixed:
        other = extract_structure(g, mixed)
        r = gji_check(g, st, other)
        report.verdict(f"mixed_gji_{n}_{mixed}", r.zero, r.witness)
    omega = _hoce(g, n + 1)
    ratio = cocycle_ratio(type(st)(g, n, st.mixed, tensor, 0), omega)
    report.result["scalar_vs_cocycle"] = None if ratio is None else str(ratio)
    report.verdict("proportional_to_cocycle", ratio is not None,
                   proportionality_witness(tensor, omega), "pass", "fail")


def cmd_brst(cfg, report):
    g = _load(cfg)
    o = cfg.options
    _closure(report, g)
    if not o.get("complete"):
        rho = _rep(g, o.get("rep"))
        op = brst_rho(g, rho) if not rho.is_trivial() else brst_trivial(g)
        chk = nilpotency_check(op, rho.dim_V)
        report.result.update({"terms": [2], "nilpotent": chk.zero, "checked": chk.checked})
        report.verdict("nilpotent", chk.zero, chk.witness)
        return
    orders = sorted({q - 1 for q in catalog(cfg.algebra).cocycle_orders if q > 3})
    structures = []
    for n in orders:
        st = extract_structure(g, n)
        if st.is_empty():
            continue
        if any(m["kind"] == "Omega" for m in cfg.mutations) and n == orders[-1]:
            st = from_cocycle(g, mutate_tensor(st.structure, cfg.mutations))
        structures.append(st)
    _, rep = complete_brst(g, structures, exhaustive=o.get("exhaustive"))
    doc = rep.to_json()
    report.result.update({"terms": doc["terms"], "nilpotent": doc["nilpotent"],
                          "anticommutators": doc["anticommutators"], "mode": doc["mode"]})
    for p in rep.pairs:
        report.verdict(f"{{{p.left},{p.right}}}", p.zero, p.witness)


def _poisson_source(g, source, mutations, report):
    if source in (None, "lie"):
        return lie_poisson(g)
    kind, _, arg = source.partition(":")
    if kind == "cocycle":
        omega = mutate_tensor(_hoce(g, int(arg)), mutations)
        ds = Coboundary(g).apply(omega)
        report.verdict("source_cocycle", ds.is_zero(), first_nonzero(ds))
        return higher_poisson(from_cocycle(g, omega))
    if kind == "const":
        idx = _int_list(arg)
        key, sgn = sort_with_parity(tuple(idx))
        if not sgn or max(idx) >= g.dim:
            raise UsageError("const source needs distinct indices below dim")
        return Multivector.constant(AltTensor.basis(key, g.dim))
    raise UsageError(f"unknown poisson source {source!r}")


def cmd_poisson(cfg, report):
    g = _load(cfg)
    o = cfg.options
    _closure(report, g)
    Lam = _poisson_source(g, o.get("source"), cfg.mutations, report)
    checks = set((o.get("check") or "gps,np").split(","))
    report.result["degree"] = Lam.degree
    if "gps" in checks:
        if Lam.degree % 2:
            report.result["gps_residual"] = "empty condition (odd degree)"
        else:
            r = gps_check(Lam)
            report.result["gps_residual"] = "0" if r.zero else "nonzero"
            report.verdict("gps", r.zero, r.witness())
            report.verdict("gps_coordinate_agrees", r.agree, None, "pass", "fail")
    if "np" in checks:
        sample = _int_list(o.get("sample")) or list(default_sample(g.dim))
        r = np_check(Lam, sample)
        doc = r.to_json()
        for key in ("np_differential", "np_algebraic_at_sample", "decomposable_hint",
                    "differential_witness", "algebraic_witness"):
            if key in doc:
                report.result[key] = doc[key]
        if o.get("require_np"):
            report.verdict("np_differential", r.differential_zero, doc.get("differential_witness"))
            report.verdict("np_algebraic", not r.algebraic_sample, doc.get("algebraic_witness"))
        if "fi" in checks and r.differential:
            I, J = min(r.differential)
            xs = [PolyFunction.var(i, g.dim) for i in range(g.dim)]
            res = fi_residual(Lam, [xs[i] for i in I], [xs[j] for j in J])
            report.result["fi_witness"] = {"f": [f"x{i}" for i in I], "g": [f"x{j}" for j in J],
                                           "residual": str(res)}


COMMANDS = {
    "catalog": cmd_catalog,
    "algebra": cmd_algebra,
    "invariants": cmd_invariants,
    "cocycle": cmd_cocycle,
    "cohomology": cmd_cohomology,
    "multibracket": cmd_multibracket,
    "brst": cmd_brst,
    "poisson": cmd_poisson,
}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    p = argparse.ArgumentParser(prog="liecoh", description="Exact Lie algebra cohomology checks.")
    p.add_argument("--version", action="version", version=f"liecoh {__version__}")
    sub = p.add_subparsers(dest="command")

    def common(sp, label_positional=False):
        if label_positional:
            sp.add_argument("label", nargs="?")
        sp.add_argument("--algebra", "-a")
        sp.add_argument("--mutate", action="append", default=[], metavar="C:i,j,k:+d | Omega:i1,..:+d")
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.add_argument("--output", "-o")
        sp.add_argument("--timings", action="store_true")
        return sp

    common(sub.add_parser("catalog", help="Table row for a simple algebra"), label_positional=True)
    s = common(sub.add_parser("algebra", help="build and check structure constants"))
    s.add_argument("--show-structure", action="store_true")
    s = common(sub.add_parser("invariants", help="symmetrized traces, invariance, primitivity"))
    s.add_argument("--max-order", type=int)
    s = common(sub.add_parser("cocycle", help="odd cocycle from an invariant polynomial"))
    s.add_argument("--order", type=int)
    s.add_argument("--source", choices=("strace", "dd"))
    s.add_argument("--show-tensor", action="store_true")
    s = common(sub.add_parser("cohomology", help="Chevalley-Eilenberg cohomology"))
    s.add_argument("--max-degree", type=int)
    s.add_argument("--rep", choices=("trivial", "defining", "adjoint"))
    s.add_argument("--whitehead", action="store_true")
    s.add_argument("--relative", metavar="i,j,..", help="basis indices spanning the subalgebra")
    s.add_argument("--expect", metavar="b0,b1,..")
    s.add_argument("--allow-modular", action="store_true")
    s = common(sub.add_parser("multibracket", help="higher-order bracket structure and GJI"))
    s.add_argument("--order", type=int)
    s.add_argument("--verify", default="gji")
    s.add_argument("--mixed", type=int, metavar="M", help="also check the mixed identity with order M")
    s = common(sub.add_parser("brst", help="BRST operators and nilpotency"))
    s.add_argument("--rep", choices=("trivial", "defining", "adjoint"))
    s.add_argument("--complete", action="store_true")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--exhaustive", action="store_true", default=None)
    s = common(sub.add_parser("poisson", help="generalized and Nambu-Poisson checks"))
    s.add_argument("--source", help="lie | cocycle:Q | const:i,j,..")
    s.add_argument("--check", default="gps,np", help="comma list from gps,np,fi")
    s.add_argument("--sample", metavar="x1,x2,..")
    s.add_argument("--require-np", action="store_true")
    return p


_GLOBAL = {"command", "algebra", "label", "mutate", "format", "output", "timings"}


def _config(ns):
    algebra = ns.algebra or getattr(ns, "label", None)
    options = {k: v for k, v in vars(ns).items() if k not in _GLOBAL and v not in (None, False)}
    return RunConfig(ns.command, algebra, options, [parse_mutation(t) for t in ns.mutate],
                     ns.output, ns.format, ns.timings)


def _threads():
    raw = os.environ.get("LIECOH_THREADS")
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"LIECOH_THREADS must be an integer, got {raw!r}") from None


def run(argv=None):
    """Return (exit code, Report or None)."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return (exc.code if isinstance(exc.code, int) else 2), None
    if not ns.command:
        parser.print_usage(sys.stderr)
        return 2, None
    try:
        _threads()  # computations are sequential; the value only bounds parallelism
        cfg = _config(ns)
        report = Report(cfg)
        t0 = time.perf_counter()
        try:
            COMMANDS[cfg.command](cfg, report)
        except FALSIFIED as exc:
            report.verdict(exc.kind, False, exc.to_json())
        report.seconds = time.perf_counter() - t0
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"liecoh: error: {exc}", file=sys.stderr)
        return 2, None
    except LiecohError as exc:
        print(json.dumps({"schema": SCHEMA, "error": exc.to_json()}, sort_keys=True), file=sys.stderr)
        return 2, None
    return (0 if report.passed else 1), report


def main(argv=None):
    code, report = run(argv)
    if report is not None:
        text = report_render(report, report.config.fmt)
        if report.config.output:
            with open(report.config.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
