"""Command line front end.

Every subcommand reads one JSON job document (a file path or - for stdin),
validates it against the shipped schema, runs the computation, and writes a
deterministic text or JSON document.  Identical jobs produce byte-identical
output.

Exit codes: 0 success, 2 malformed job (with the offending location),
3 mathematical precondition failure, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import jsonschema

from . import render
from .coeffs import DFrac, DPoly, y_polynomial_coeffs
from .errors import HirzlocError, JobError
from .hirzebruch import (ChartTerm, assemble, chi_from_local, chi_of_projective_class,
                         cone_class, hypersurface_numerator, smooth_local_class,
                         snc_local_class, solve_singular_contribution,
                         toric_local_class)
from .lattice import Cone, LatticeBasis
from .laurent import ClassFraction
from .series import Series, residue
from .sform import SVariableSet, positivity_report, rewrite_in_s

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_MATH = 3
EXIT_INTERNAL = 4


def _load_schema():
    with resources.files("hirzloc.schema").joinpath("job-v1.schema.json").open() as fh:
        return json.load(fh)


def load_job(path: str) -> dict:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            text = Path(path).read_text()
    except OSError as exc:
        raise JobError(f"cannot read job file {path}: {exc}") from exc
    try:
        job = json.loads(text)
    except json.JSONDecodeError as exc:
        raise JobError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: "
                       f"{exc.msg}") from exc
    validator = jsonschema.Draft202012Validator(_load_schema())
    errors = sorted(validator.iter_errors(job), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        loc = "/".join(str(p) for p in err.absolute_path) or "<root>"
        raise JobError(f"schema violation at {loc}: {err.message}")
    return job


# -- job pieces ---------------------------------------------------------------

def _dpoly_from_y(coeffs) -> DPoly:
    return DPoly([render.frac_from_json(c) for c in coeffs]).to_other_basis()


def _point_class(obj, rank: int) -> ClassFraction:
    if "weights" in obj:
        return smooth_local_class([tuple(w) for w in obj["weights"]], rank)
    return render.class_from_json(obj["class"])


def _chart_terms(objs):
    out = []
    for t in objs:
        factors = []
        for kind, payload in t["factors"]:
            if kind == "custom":
                factors.append(("custom", render.class_from_json(payload)))
            else:
                factors.append((kind, tuple(int(x) for x in payload)))
        out.append(ChartTerm(t.get("sign", 1), t.get("multiplicity", 1),
                             tuple(factors)))
    return out


def _svars(job) -> SVariableSet | None:
    if "alphabet" not in job:
        return None
    den = job.get("denominator_alphabet")
    return SVariableSet([tuple(w) for w in job["alphabet"]],
                        None if den is None else [tuple(w) for w in den])


def _class_output(cf: ClassFraction, job, basis: str):
    doc = {"class": render.class_to_json(cf)}
    lines = [f"class: {render.class_str(cf, basis)}"]
    svars = _svars(job)
    if svars is not None:
        form = rewrite_in_s(cf, svars)
        rep = positivity_report(form.numerator, svars)
        den = " * ".join(
            (render.monomial_str(w, "S") if k == 1
             else f"{render.monomial_str(w, 'S')}^{k}")
            for w, k in form.denominator) or "1"
        doc["s_form"] = {
            "numerator": render.spoly_to_json(form.numerator),
            "denominator": [[list(w), k] for w, k in form.denominator],
            "exact": form.exact,
        }
        doc["positivity"] = render.report_to_json(rep, svars)
        lines.append(f"s-numerator: {render.spoly_str(form.numerator, svars, basis)}")
        lines.append(f"s-denominator: {den}")
        lines.append(f"s-rewrite-exact: {'yes' if form.exact else 'no'}")
        lines.extend(render.report_text_lines(rep, svars, basis))
    return doc, lines


def _genus_strings(p: DPoly, basis: str) -> str:
    if basis == "y":
        return render.dpoly_str(p.to_other_basis(), "y")
    return render.dpoly_str(p, "d")


# -- command handlers ------------------------------------------------------------

def run_chi(job, basis):
    rank = job["rank"]
    contribs = [_point_class(p, rank) for p in job["points"]]
    genus = chi_from_local(contribs)
    doc = {"chi": {"d": [render.frac_to_json(c) for c in genus.c],
                   "y": [render.frac_to_json(c)
                         for c in y_polynomial_coeffs(genus)]}}
    lines = [f"chi: {_genus_strings(genus, basis)}"]
    return doc, lines


def run_toric(job, basis):
    rank = job["rank"]
    lattice = LatticeBasis(rank, job.get("lattice"))
    cone = Cone([tuple(r) for r in job["cone"]["rays"]],
                side=job["cone"].get("side", "primal"))
    cls = toric_local_class(cone, lattice)
    return _class_output(cls, job, basis)


def run_snc(job, basis):
    cls = snc_local_class(job["n"], job["k"],
                          [tuple(w) for w in job["weights"]], job["variant"])
    return _class_output(cls, job, basis)


def run_cone(job, basis):
    n = job["n"]
    if "degree" in job:
        f = hypersurface_numerator(n, job["degree"])
        chi = chi_of_projective_class(f, n)
    else:
        if "f" not in job or "chi" not in job:
            raise JobError("cone job needs either degree or both f and chi")
        spec = job["f"]
        coeffs = [DFrac(DPoly([render.frac_from_json(x) for x in c]))
                  for c in spec["coeffs"]]
        f = Series("U", 0, coeffs, spec["modulus"] - 1)
        chi = _dpoly_from_y(job["chi"])
    cls = cone_class(f, n, chi, bool(job.get("closed", True)))
    doc, lines = _class_output(cls, job, basis)
    doc["chi"] = {"y": [render.frac_to_json(c) for c in y_polynomial_coeffs(chi)]}
    lines.insert(0, "chi: " + _genus_strings(chi, "y" if basis == "y" else basis))
    return doc, lines


def run_assemble(job, basis):
    cls = assemble(_chart_terms(job["terms"]), job["rank"])
    return _class_output(cls, job, basis)


def run_solve(job, basis):
    rank = job["rank"]
    chi = _dpoly_from_y(job["chi"])
    known = [_point_class(p, rank) for p in job["known"]]
    weights = [tuple(w) for w in job["denominator"]]
    num = solve_singular_contribution(chi, known, weights)
    doc = {"numerator": render.laurent_to_json(num),
           "denominator": [list(w) for w in weights]}
    lines = [f"numerator: {render.laurent_str(num, basis)}",
             "denominator: " + " * ".join(f"(1 - {render.monomial_str(w)})"
                                          for w in sorted(weights, key=lambda v: (sum(v), v)))]
    return doc, lines


def run_positivity(job, basis):
    if "polynomial" in job:
        from .render import spoly_from_json
        p = spoly_from_json(job["polynomial"])
        alphabet = job.get("alphabet")
        if alphabet is None:
            alphabet = [tuple(int(i == j) for j in range(p.nvars))
                        for i in range(p.nvars)]
        svars = SVariableSet([tuple(w) for w in alphabet])
        rep = positivity_report(p, svars)
        doc = {"positivity": render.report_to_json(rep, svars)}
        return doc, render.report_text_lines(rep, svars, basis)
    if "cone" not in job:
        raise JobError("positivity job needs either polynomial or cone input")
    rank = job["rank"]
    lattice = LatticeBasis(rank, job.get("lattice"))
    cone = Cone([tuple(r) for r in job["cone"]["rays"]],
                side=job["cone"].get("side", "primal"))
    cls = toric_local_class(cone, lattice)
    svars = _svars(job)
    if svars is None:
        raise JobError("positivity of a cone class needs an alphabet")
    form = rewrite_in_s(cls, svars)
    rep = positivity_report(form.numerator, svars)
    doc = {"positivity": render.report_to_json(rep, svars),
           "s_rewrite_exact": form.exact}
    return doc, render.report_text_lines(rep, svars, basis)


def run_residue(job, basis):
    terms = {}
    for k, coeffs in job["f"]["terms"]:
        terms[int(k)] = DFrac(DPoly([render.frac_from_json(x) for x in coeffs]))
    low = min(terms) if terms else 0
    high = max(terms) if terms else 0
    f = Series.from_terms("U", terms, high)
    value = residue(f, job.get("substitution_order"))
    value = DFrac.coerce(value if not isinstance(value, int) else Fraction(value))
    doc = {"residue": render.dfrac_to_json(value)}
    lines = [f"residue: {render.coeff_str(value, basis)}"]
    return doc, lines


HANDLERS = {
    "chi": run_chi,
    "toric": run_toric,
    "snc": run_snc,
    "cone": run_cone,
    "assemble": run_assemble,
    "solve": run_solve,
    "positivity": run_positivity,
    "residue": run_residue,
}


def run_job(job: dict, basis: str | None = None, fmt: str | None = None) -> str:
    command = job.get("command")
    if command not in HANDLERS:
        raise JobError(f"unknown command {command!r}")
    basis = basis or job.get("basis", "delta")
    fmt = fmt or job.get("format", "text")
    doc, lines = HANDLERS[command](job, basis)
    doc = {"schema": "hirzloc.result/1", "command": command, "basis": basis, **doc}
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    header = [f"command: {command}", f"basis: {basis}"]
    if "label" in job:
        header.insert(0, f"label: {job['label']}")
    return "\n".join(header + lines) + "\n"


# -- corpus runner ------------------------------------------------------------------

def run_corpus(directory: str, out=sys.stdout) -> int:
    root = Path(directory)
    jobs = sorted(root.glob("*.job.json"))
    failures = 0
    for jobfile in jobs:
        name = jobfile.name[: -len(".job.json")]
        expected_file = root / f"{name}.expected.txt"
        label = ""
        try:
            job = load_job(str(jobfile))
            label = job.get("label", "")
            actual = run_job(job)
            expected = expected_file.read_text()
            ok = actual == expected
        except FileNotFoundError:
            ok = False
            actual = "<no expected file>"
            expected = ""
        except HirzlocError as exc:
            ok = False
            actual = f"<error: {exc}>"
            expected = expected_file.read_text() if expected_file.exists() else ""
        status = "PASS" if ok else "FAIL"
        if not ok:
            failures += 1
        print(f"{status}  {name}" + (f"  — {label}" if label else ""), file=out)
        if not ok:
            print(f"  expected ({expected_file.name}):", file=out)
            for line in expected.splitlines()[:10]:
                print(f"    {line}", file=out)
            print("  actual:", file=out)
            for line in actual.splitlines()[:10]:
                print(f"    {line}", file=out)
    print(f"{len(jobs) - failures}/{len(jobs)} passed", file=out)
    return 1 if failures else 0


def default_corpus_dir() -> str:
    here = Path(__file__).resolve()
    for parent in here.parents:
        cand = parent / "corpus"
        if cand.is_dir():
            return str(cand)
    return "corpus"


# -- entry point -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hirzloc",
        description="Exact localized equivariant Hirzebruch classes")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in HANDLERS:
        p = sub.add_parser(name, help=f"run a {name} job")
        p.add_argument("job", help="job JSON file, or - for stdin")
        p.add_argument("--basis", choices=["y", "delta"], default=None)
        p.add_argument("--format", choices=["text", "json"], default=None)
        p.add_argument("--truncation", type=int, default=None)
    c = sub.add_parser("corpus", help="run the golden example corpus")
    c.add_argument("dir", nargs="?", default=None)
    c.add_argument("--corpus", dest="corpus_dir", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "corpus":
            directory = args.dir or args.corpus_dir or default_corpus_dir()
            return run_corpus(directory)
        job = load_job(args.job)
        if job.get("command") != args.command:
            raise JobError(
                f"job document says command {job.get('command')!r}, "
                f"invoked as {args.command!r}")
        sys.stdout.write(run_job(job, basis=args.basis, fmt=args.format))
        return EXIT_OK
    except JobError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except HirzlocError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH
    except Exception as exc:  # noqa: BLE001 - deliberate catch-all boundary
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
