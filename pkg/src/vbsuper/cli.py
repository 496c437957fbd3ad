"""Command-line surface: thin wrappers around the library operations.

Every subcommand reads canonical documents (stdin or a file), calls the
corresponding library operation, and emits a canonical document or a
machine-readable report.  Exit codes: 0 success, 1 check failure,
2 usage or parse error.
"""

import argparse
import json
import sys

from .linalg import Matrix
from .basering import free_module, module_hom_space
from .algebroid import (Connection, form_from_tensor, scalar_connection,
                        cohomology, NotFlat)
from .superconn import (SuperData, SuperDataError, SigmaGauge,
                        gauge_transform, is_flat_super, flatness_report,
                        dualize)
from .chernsimons import cs_class, identity_metric, MetricError
from .classify import ClassifyError, normal_form
from .models import (ModelError, lie_algebra, adjoint_matrices,
                     adjoint_point_model, random_flat_instance)
from .io import (IoError, Document, parse, emit, superdata_document,
                 add_scalar_form, scalar_to_str)

EXIT_OK = 0
EXIT_CHECK = 1
EXIT_USAGE = 2


def _read_text(path):
    if path is None or path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _write_output(args, text):
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error_block(exc):
    if isinstance(exc, IoError):
        block = exc.error_block()
    else:
        block = {"error": str(exc), "section": None, "path": None}
    sys.stderr.write(json.dumps(block, sort_keys=True) + "\n")


def _load_document(args):
    return parse(_read_text(getattr(args, "file", None)))


def _single_superdata(doc):
    return doc.single("superdata")


# ---------------------------------------------------------------------------
# subcommands

def cmd_check(args):
    paths = args.files or [None]
    failed = False
    for path in paths:
        try:
            parse(_read_text(path))
        except IoError as exc:
            _error_block(exc)
            if exc.section is None:
                return EXIT_USAGE
            failed = True
    return EXIT_CHECK if failed else EXIT_OK


def cmd_flat(args):
    doc = _load_document(args)
    data = _single_superdata(doc)
    report = flatness_report(data)
    out = {"flat": report == [], "conditions": report}
    _write_output(args, json.dumps(out, sort_keys=True, indent=2) + "\n")
    return EXIT_OK if report == [] else EXIT_CHECK


def cmd_gauge(args):
    doc = _load_document(args)
    data = _single_superdata(doc)
    hom_dim = data.hom_ec().dim
    candidates = [sid for sid in doc.find("form")
                  if doc.objects[sid].degree == 1
                  and doc.objects[sid].space.coeff.dim == hom_dim]
    if len(candidates) != 1:
        raise IoError("expected exactly one degree-1 Hom(E, C)-valued "
                      "form to use as the gauge section, found %d"
                      % len(candidates))
    sigma_form = doc.objects[candidates[0]]
    sigma = SigmaGauge(data, form_from_tensor(
        data.algebroid, data.hom_ec().module, 1,
        {t: sigma_form.value(t) for t in sigma_form.space.tuples}))
    moved = gauge_transform(data, sigma)
    _write_output(args, emit(superdata_document(moved, prefix="gauged")))
    return EXIT_OK


def cmd_cs(args):
    doc = _load_document(args)
    data = _single_superdata(doc)
    metrics = doc.find("metric")
    g = doc.objects[metrics[0]] if metrics else identity_metric(data)
    if len(metrics) > 1:
        raise IoError("at most one metric section expected")
    handle = cs_class(data, args.k, g)
    out = superdata_document(data, prefix="in")
    for d in handle.representative.degrees():
        add_scalar_form(out, "cs.degree%d" % d,
                        handle.representative.component(d))
    payload = {"k": {"text": str(args.k)},
               "coordinates": {"scalars":
                               [scalar_to_str(x)
                                for x in handle.coordinates]}}
    for d, eta in handle.certificates.items():
        fid = add_scalar_form(out, "cs.primitive%d" % d, eta)
        payload["primitive_degree%d" % d] = {"form": fid}
    body = {"claim": "characteristic class with exactness certificates "
                     "for every component outside degree %d"
                     % (2 * args.k - 1)}
    body.update(payload)
    out.add("certificate", "cs.class", _cert_from_body(out, body))
    _write_output(args, emit(out))
    return EXIT_OK


def _cert_from_body(doc, body):
    """Resolve a raw certificate body into the (claim, payload) pair the
    io layer serializes."""
    claim = body.pop("claim")
    payload = {}
    for key, val in body.items():
        (tag, inner), = val.items()
        if tag == "form":
            payload[key] = doc.objects[inner]
        elif tag == "scalars":
            payload[key] = tuple(inner)
        else:
            payload[key] = inner
    return (claim, payload)


def cmd_classify(args):
    doc = _load_document(args)
    data = _single_superdata(doc)
    nf = normal_form(data)
    out = superdata_document(data, prefix="in")
    tup = nf.invariant
    out.add("tuple", "classify.tuple", tup)
    gid = "classify.gauge"
    if out._id_of(nf.gauge.form.space.coeff, "module") is None:
        out.add("module", gid + ".coeff", nf.gauge.form.space.coeff)
    out.add("form", gid, nf.gauge.form)
    out.add("certificate", "classify.cert",
            ("gauge section carrying the input to its block-diagonal "
             "normal form", {"gauge": nf.gauge.form,
                             "rank": (tup.rank_partial,)}))
    _write_output(args, emit(out))
    return EXIT_OK


def cmd_cohomology(args):
    doc = _load_document(args)
    conns = doc.find("connection")
    if len(conns) == 1:
        conn = doc.objects[conns[0]]
    else:
        # several connections (a superdata document) or none: use the
        # scalar coefficients of the unique algebroid
        conn = scalar_connection(doc.single("algebroid"))
    dim_h, reps = cohomology(conn, args.n)
    out = Document()
    alg = conn.algebroid
    out.add("ring", "h.ring", alg.ring)
    out.add("module", "h.A", alg.module_A)
    out.add("algebroid", "h.alg", alg)
    if reps and out._id_of(reps[0].space.coeff, "module") is None:
        out.add("module", "h.coeff", reps[0].space.coeff)
    for i, rep in enumerate(reps):
        out.add("form", "h.rep%d" % i, rep)
    out.add("certificate", "h.result",
            ("cohomology in degree %d has dimension %d"
             % (args.n, dim_h), {"dimension": (dim_h,)}))
    _write_output(args, emit(out))
    return EXIT_OK


def _example_aff1_type1():
    from .classify import build_type1
    alg = lie_algebra("aff1")
    M = free_module(alg.ring, 2)
    conn = Connection(alg, M, adjoint_matrices(alg))
    return build_type1(alg, M, conn)


def _example_aff1_lambda():
    alg = lie_algebra("aff1")
    E = free_module(alg.ring, 1)
    C = free_module(alg.ring, 1)
    nab = [Matrix.from_rows([[3]]), Matrix.zero(1, 1)]
    hom = module_hom_space(E, C)
    omega = form_from_tensor(alg, hom.module, 2, {})
    return SuperData(alg, E, C, Matrix.identity(1),
                     Connection(alg, C, nab), Connection(alg, E, nab),
                     omega)


EXAMPLES = {
    "aff1-type1": lambda args: _example_aff1_type1(),
    "aff1-lambda": lambda args: _example_aff1_lambda(),
    "sl2-adjoint": lambda args: adjoint_point_model(lie_algebra("sl2")),
    "random-flat": lambda args: random_flat_instance(args.seed, (1, 1, 1)),
}


def cmd_example(args):
    if args.name not in EXAMPLES:
        sys.stderr.write("unknown example %r; available: %s\n"
                         % (args.name, ", ".join(sorted(EXAMPLES))))
        return EXIT_USAGE
    data = EXAMPLES[args.name](args)
    _write_output(args, emit(superdata_document(data, prefix=args.name)))
    return EXIT_OK


def cmd_dualize(args):
    doc = _load_document(args)
    data = _single_superdata(doc)
    dual = dualize(data)
    _write_output(args, emit(superdata_document(dual, prefix="dual")))
    return EXIT_OK


# ---------------------------------------------------------------------------
# entry point

def build_parser():
    p = argparse.ArgumentParser(
        prog="vbsuper",
        description="flat superconnections on two-term complexes: "
                    "checking, gauges, characteristic classes, "
                    "classification")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("check", help="validate documents")
    sp.add_argument("files", nargs="*", help="document files (default "
                    "stdin)")
    sp.set_defaults(fn=cmd_check)

    for name, fn, extra in (
            ("flat", cmd_flat, ()),
            ("gauge", cmd_gauge, ()),
            ("cs", cmd_cs, ("k",)),
            ("classify", cmd_classify, ()),
            ("cohomology", cmd_cohomology, ("n",)),
            ("dualize", cmd_dualize, ())):
        sp = sub.add_parser(name)
        sp.add_argument("file", nargs="?", default=None,
                        help="document file (default stdin)")
        if "k" in extra:
            sp.add_argument("--k", type=int, default=1)
        if "n" in extra:
            sp.add_argument("--n", type=int, default=1)
        sp.add_argument("--output", default=None)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("example", help="emit a model document")
    sp.add_argument("name")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output", default=None)
    sp.set_defaults(fn=cmd_example)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except IoError as exc:
        _error_block(exc)
        return EXIT_USAGE
    except (SuperDataError, ClassifyError, ModelError, MetricError,
            NotFlat) as exc:
        _error_block(exc)
        return EXIT_CHECK


if __name__ == "__main__":
    sys.exit(main())
