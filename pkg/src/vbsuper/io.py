"""Interchange format: a canonical JSON tree for every artifact.

One self-describing document carries typed sections (ring, module,
algebroid, connection, form, superdata, metric, certificate, tuple)
cross-referenced by section id.  Scalars are serialized as reduced
"p/q" strings, never as floats; serialization is canonical (sorted
keys, fixed section order by id), so parse(emit(doc)) is the identity
and emit(parse(text)) is the canonical form of the text.
"""

import json

from .scalars import rational, format_rational
from .linalg import Matrix
from .basering import (BaseRing, RModule, check_ring, check_module,
                       module_hom_space)
from .algebroid import (Algebroid, Connection, Form, check_algebroid,
                        check_connection, form_from_tensor)
from .superconn import SuperData

FORMAT_VERSION = "1"

KINDS = ("ring", "module", "algebroid", "connection", "form", "superdata",
         "metric", "certificate", "tuple")


class IoError(ValueError):
    """Parse or validation failure, carrying the section id and path."""

    def __init__(self, message, section=None, path=None):
        self.section = section
        self.path = path
        loc = ""
        if section is not None:
            loc += " [section %r]" % section
        if path is not None:
            loc += " [at %s]" % path
        super().__init__(message + loc)

    def error_block(self):
        return {"error": str(self), "section": self.section,
                "path": self.path}


# ---------------------------------------------------------------------------
# scalars and matrices

def scalar_to_str(x):
    return format_rational(rational(x))


def str_to_scalar(s, section=None, path=None):
    if not isinstance(s, str):
        raise IoError("scalar must be a string, got %r" % (s,),
                      section, path)
    body = s[1:] if s.startswith("-") else s
    if not body or not all(c.isdigit() or c == "/" for c in body) \
            or body.count("/") > 1 or body.startswith("/") \
            or body.endswith("/"):
        raise IoError("malformed scalar %r" % s, section, path)
    return rational(s)


def _vec_out(v):
    return [scalar_to_str(x) for x in v]


def _vec_in(v, n, section, path):
    if not isinstance(v, list) or len(v) != n:
        raise IoError("expected a list of %d scalars" % n, section, path)
    return tuple(str_to_scalar(x, section, path) for x in v)


def _matrix_out(m):
    return [_vec_out(r) for r in m.row_list()]


def _matrix_in(rows, nr, nc, section, path):
    if not isinstance(rows, list) or len(rows) != nr:
        raise IoError("expected a %d x %d matrix" % (nr, nc), section, path)
    out = [_vec_in(r, nc, section, "%s/%d" % (path, i))
           for i, r in enumerate(rows)]
    if nr == 0 or nc == 0:
        return Matrix.zero(nr, nc)
    return Matrix.from_rows([list(r) for r in out])


# ---------------------------------------------------------------------------
# the document

class Document:
    """Ordered, id-addressed collection of typed sections."""

    def __init__(self):
        self.kinds = {}
        self.objects = {}
        self.order = []

    def add(self, kind, sid, obj):
        if kind not in KINDS:
            raise IoError("unknown section kind %r" % kind, sid)
        if sid in self.objects:
            raise IoError("duplicate section id", sid)
        self.kinds[sid] = kind
        self.objects[sid] = obj
        self.order.append(sid)
        return sid

    def get(self, sid, kind=None):
        if sid not in self.objects:
            raise IoError("unresolved reference to %r" % sid, sid)
        if kind is not None and self.kinds[sid] != kind:
            raise IoError("reference %r is a %s, expected a %s"
                          % (sid, self.kinds[sid], kind), sid)
        return self.objects[sid]

    def find(self, kind):
        return [sid for sid in self.order if self.kinds[sid] == kind]

    def single(self, kind):
        found = self.find(kind)
        if len(found) != 1:
            raise IoError("expected exactly one %s section, found %d"
                          % (kind, len(found)))
        return self.objects[found[0]]

    def __eq__(self, other):
        return (isinstance(other, Document)
                and emit(self) == emit(other))

    # ---- reference bookkeeping (object identity -> section id)

    def _id_of(self, obj, kind):
        for sid in self.order:
            if self.kinds[sid] == kind and self.objects[sid] is obj:
                return sid
        for sid in self.order:
            if self.kinds[sid] != kind:
                continue
            try:
                if self.objects[sid] == obj:
                    return sid
            except ValueError:
                continue
        return None


# ---------------------------------------------------------------------------
# section serializers

def _ring_out(doc, sid, ring):
    return {"dim": ring.dim,
            "unit": _vec_out(ring.unit),
            "mult": [[_vec_out(ring.mult[i][j]) for j in range(ring.dim)]
                     for i in range(ring.dim)]}


def _module_out(doc, sid, mod):
    rid = doc._id_of(mod.ring, "ring")
    if rid is None:
        raise IoError("module ring is not a section of the document", sid)
    return {"ring": rid, "dim": mod.dim,
            "action": [_matrix_out(a) for a in mod.action]}


def _algebroid_out(doc, sid, alg):
    rid = doc._id_of(alg.ring, "ring")
    mid = doc._id_of(alg.module_A, "module")
    if rid is None or mid is None:
        raise IoError("algebroid ring or module is not a section", sid)
    n = alg.dim
    return {"ring": rid, "module": mid,
            "bracket": [[_vec_out(alg.bracket[i][j]) for j in range(n)]
                        for i in range(n)],
            "anchor": [_matrix_out(a) for a in alg.anchor]}


def _connection_out(doc, sid, conn):
    aid = doc._id_of(conn.algebroid, "algebroid")
    cid = doc._id_of(conn.coeff, "module")
    if aid is None or cid is None:
        raise IoError("connection algebroid or coefficients are not "
                      "sections", sid)
    return {"algebroid": aid, "coeff": cid,
            "nabla": [_matrix_out(m) for m in conn.nabla]}


def _form_out(doc, sid, form):
    space = form.space
    aid = doc._id_of(space.algebroid, "algebroid")
    cid = doc._id_of(space.coeff, "module")
    if aid is None or cid is None:
        raise IoError("form algebroid or coefficients are not sections", sid)
    values = {}
    for t in space.tuples:
        v = form.value(t)
        if any(x != 0 for x in v):
            values[",".join(str(i) for i in t)] = _vec_out(v)
    return {"algebroid": aid, "coeff": cid, "degree": form.degree,
            "values": values}


def _superdata_out(doc, sid, data):
    aid = doc._id_of(data.algebroid, "algebroid")
    eid = doc._id_of(data.E, "module")
    cid = doc._id_of(data.C, "module")
    ncid = doc._id_of(data.nabla_c, "connection")
    nsid = doc._id_of(data.nabla_s, "connection")
    oid = doc._id_of(data.Omega, "form")
    for ref in (aid, eid, cid, ncid, nsid, oid):
        if ref is None:
            raise IoError("superdata constituents are not sections", sid)
    return {"algebroid": aid, "side": eid, "core": cid,
            "core_anchor": _matrix_out(data.core_anchor),
            "nabla_c": ncid, "nabla_s": nsid, "omega": oid}


def _metric_out(doc, sid, metric):
    did = doc._id_of(metric.data, "superdata")
    if did is None:
        raise IoError("metric superdata is not a section", sid)
    return {"superdata": did, "gram_C": _matrix_out(metric.gram_C),
            "gram_E": _matrix_out(metric.gram_E)}


def _certificate_out(doc, sid, cert):
    claim, payload = cert
    out = {"claim": claim}
    for key, val in payload.items():
        if isinstance(val, Matrix):
            out[key] = {"matrix": _matrix_out(val)}
        elif isinstance(val, Form):
            fid = doc._id_of(val, "form")
            if fid is None:
                raise IoError("certificate form %r is not a section" % key,
                              sid)
            out[key] = {"form": fid}
        elif isinstance(val, str):
            out[key] = {"text": val}
        elif isinstance(val, (list, tuple)):
            out[key] = {"scalars": _vec_out(val)}
        else:
            raise IoError("unserializable certificate payload %r" % key, sid)
    return out


def _tuple_out(doc, sid, tup):
    return {"dims": list(tup.dims), "rank": tup.rank_partial,
            "nabla_K": [_matrix_out(m) for m in tup.nabla_K],
            "nabla_nu": [_matrix_out(m) for m in tup.nabla_nu],
            "omega_coords": _vec_out(tup.omega_coords)}


_OUT = {"ring": _ring_out, "module": _module_out, "algebroid": _algebroid_out,
        "connection": _connection_out, "form": _form_out,
        "superdata": _superdata_out, "metric": _metric_out,
        "certificate": _certificate_out, "tuple": _tuple_out}


def emit(doc):
    sections = []
    for sid in doc.order:
        kind = doc.kinds[sid]
        body = _OUT[kind](doc, sid, doc.objects[sid])
        body["id"] = sid
        body["kind"] = kind
        sections.append(body)
    tree = {"format_version": FORMAT_VERSION, "sections": sections}
    return json.dumps(tree, sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# parsing

def _need(body, key, sid, types=None):
    if key not in body:
        raise IoError("missing field %r" % key, sid, key)
    val = body[key]
    if types is not None and not isinstance(val, types):
        raise IoError("field %r has the wrong type" % key, sid, key)
    return val


def _ring_in(doc, sid, body):
    dim = _need(body, "dim", sid, int)
    unit = _vec_in(_need(body, "unit", sid, list), dim, sid, "unit")
    mult_raw = _need(body, "mult", sid, list)
    if len(mult_raw) != dim or any(not isinstance(r, list) or len(r) != dim
                                   for r in mult_raw):
        raise IoError("mult tensor has wrong shape", sid, "mult")
    mult = [[_vec_in(mult_raw[i][j], dim, sid, "mult/%d/%d" % (i, j))
             for j in range(dim)] for i in range(dim)]
    ring = BaseRing(dim, mult, unit)
    report = check_ring(ring)
    if report:
        raise IoError("; ".join(report), sid)
    return ring


def _module_in(doc, sid, body):
    ring = doc.get(_need(body, "ring", sid, str), "ring")
    dim = _need(body, "dim", sid, int)
    action_raw = _need(body, "action", sid, list)
    if len(action_raw) != ring.dim:
        raise IoError("one action matrix per ring basis element required",
                      sid, "action")
    action = [_matrix_in(a, dim, dim, sid, "action/%d" % r)
              for r, a in enumerate(action_raw)]
    mod = RModule(ring, dim, action)
    report = check_module(mod)
    if report:
        raise IoError("; ".join(report), sid)
    return mod


def _algebroid_in(doc, sid, body):
    ring = doc.get(_need(body, "ring", sid, str), "ring")
    mod = doc.get(_need(body, "module", sid, str), "module")
    n = mod.dim
    bracket_raw = _need(body, "bracket", sid, list)
    if len(bracket_raw) != n or any(not isinstance(r, list) or len(r) != n
                                    for r in bracket_raw):
        raise IoError("bracket tensor has wrong shape", sid, "bracket")
    bracket = [[_vec_in(bracket_raw[i][j], n, sid,
                        "bracket/%d/%d" % (i, j))
                for j in range(n)] for i in range(n)]
    anchor_raw = _need(body, "anchor", sid, list)
    if len(anchor_raw) != n:
        raise IoError("one anchor matrix per basis element required", sid,
                      "anchor")
    anchor = [_matrix_in(a, ring.dim, ring.dim, sid, "anchor/%d" % i)
              for i, a in enumerate(anchor_raw)]
    alg = Algebroid(ring, mod, bracket, anchor)
    report = check_algebroid(alg)
    if report:
        raise IoError("; ".join(report), sid)
    return alg


def _connection_in(doc, sid, body):
    alg = doc.get(_need(body, "algebroid", sid, str), "algebroid")
    coeff = doc.get(_need(body, "coeff", sid, str), "module")
    nabla_raw = _need(body, "nabla", sid, list)
    if len(nabla_raw) != alg.dim:
        raise IoError("one matrix per algebroid basis element required",
                      sid, "nabla")
    nabla = [_matrix_in(m, coeff.dim, coeff.dim, sid, "nabla/%d" % i)
             for i, m in enumerate(nabla_raw)]
    conn = Connection(alg, coeff, nabla)
    report = check_connection(conn)
    if report:
        raise IoError("; ".join(report), sid)
    return conn


def _form_in(doc, sid, body):
    alg = doc.get(_need(body, "algebroid", sid, str), "algebroid")
    coeff = doc.get(_need(body, "coeff", sid, str), "module")
    degree = _need(body, "degree", sid, int)
    if degree < 0:
        raise IoError("form degree out of range", sid, "degree")
    values_raw = _need(body, "values", sid, dict)
    values = {}
    for key, v in values_raw.items():
        try:
            t = tuple(int(x) for x in key.split(",")) if key else ()
        except ValueError:
            raise IoError("malformed index tuple %r" % key, sid, "values")
        if len(t) != degree or any(not 0 <= i < alg.dim for i in t) \
                or list(t) != sorted(set(t)):
            raise IoError("index tuple %r is not strictly increasing in "
                          "range" % key, sid, "values")
        values[t] = _vec_in(v, coeff.dim, sid, "values/%s" % key)
    try:
        return form_from_tensor(alg, coeff, degree, values)
    except ValueError as exc:
        raise IoError(str(exc), sid, "values")


def _superdata_in(doc, sid, body):
    alg = doc.get(_need(body, "algebroid", sid, str), "algebroid")
    E = doc.get(_need(body, "side", sid, str), "module")
    C = doc.get(_need(body, "core", sid, str), "module")
    part = _matrix_in(_need(body, "core_anchor", sid, list), E.dim, C.dim,
                      sid, "core_anchor")
    nabla_c = doc.get(_need(body, "nabla_c", sid, str), "connection")
    nabla_s = doc.get(_need(body, "nabla_s", sid, str), "connection")
    omega = doc.get(_need(body, "omega", sid, str), "form")
    try:
        data = SuperData(alg, E, C, part, nabla_c, nabla_s, omega)
    except ValueError as exc:
        raise IoError(str(exc), sid)
    report = data.validate()
    if report:
        raise IoError("; ".join(report), sid)
    return data


def _metric_in(doc, sid, body):
    from .chernsimons import GradedMetric, MetricError
    data = doc.get(_need(body, "superdata", sid, str), "superdata")
    gc = _matrix_in(_need(body, "gram_C", sid, list), data.C.dim,
                    data.C.dim, sid, "gram_C")
    ge = _matrix_in(_need(body, "gram_E", sid, list), data.E.dim,
                    data.E.dim, sid, "gram_E")
    try:
        return GradedMetric(data, gc, ge)
    except MetricError as exc:
        raise IoError(str(exc), sid)


def _certificate_in(doc, sid, body):
    claim = _need(body, "claim", sid, str)
    payload = {}
    for key, val in body.items():
        if key in ("claim", "id", "kind"):
            continue
        if not isinstance(val, dict) or len(val) != 1:
            raise IoError("malformed certificate payload", sid, key)
        (tag, inner), = val.items()
        if tag == "matrix":
            nr = len(inner)
            nc = len(inner[0]) if inner else 0
            payload[key] = _matrix_in(inner, nr, nc, sid, key)
        elif tag == "form":
            payload[key] = doc.get(inner, "form")
        elif tag == "text":
            payload[key] = inner
        elif tag == "scalars":
            payload[key] = _vec_in(inner, len(inner), sid, key)
        else:
            raise IoError("unknown certificate payload tag %r" % tag, sid,
                          key)
    return (claim, payload)


def _tuple_in(doc, sid, body):
    from .classify import ClassifyingTuple
    dims = _need(body, "dims", sid, list)
    if len(dims) != 2 or not all(isinstance(d, int) for d in dims):
        raise IoError("dims must be two integers", sid, "dims")
    rank = _need(body, "rank", sid, int)
    nk_raw = _need(body, "nabla_K", sid, list)
    nnu_raw = _need(body, "nabla_nu", sid, list)
    def mats(raw, path):
        out = []
        for i, m in enumerate(raw):
            nr = len(m)
            nc = len(m[0]) if m else 0
            out.append(_matrix_in(m, nr, nc, sid, "%s/%d" % (path, i)))
        return tuple(out)
    coords_raw = _need(body, "omega_coords", sid, list)
    coords = _vec_in(coords_raw, len(coords_raw), sid, "omega_coords")
    return ClassifyingTuple(tuple(dims), rank, mats(nk_raw, "nabla_K"),
                            mats(nnu_raw, "nabla_nu"), coords)


_IN = {"ring": _ring_in, "module": _module_in, "algebroid": _algebroid_in,
       "connection": _connection_in, "form": _form_in,
       "superdata": _superdata_in, "metric": _metric_in,
       "certificate": _certificate_in, "tuple": _tuple_in}


def parse(text):
    try:
        tree = json.loads(text)
    except json.JSONDecodeError as exc:
        raise IoError("syntax error: %s" % exc)
    if not isinstance(tree, dict):
        raise IoError("document root must be an object")
    if tree.get("format_version") != FORMAT_VERSION:
        raise IoError("unsupported format_version %r"
                      % tree.get("format_version"))
    sections = tree.get("sections")
    if not isinstance(sections, list):
        raise IoError("missing sections list")
    doc = Document()
    for idx, body in enumerate(sections):
        if not isinstance(body, dict):
            raise IoError("section %d is not an object" % idx)
        sid = body.get("id")
        kind = body.get("kind")
        if not isinstance(sid, str) or not sid:
            raise IoError("section %d has no id" % idx)
        if kind not in KINDS:
            raise IoError("unknown section kind %r" % kind, sid)
        doc.add(kind, sid, _IN[kind](doc, sid, body))
    return doc


# ---------------------------------------------------------------------------
# document builders

def superdata_document(data, prefix="s"):
    """A full document for one superdata instance, with every
    constituent as its own section."""
    doc = Document()
    doc.add("ring", prefix + ".ring", data.algebroid.ring)
    doc.add("module", prefix + ".A", data.algebroid.module_A)
    doc.add("algebroid", prefix + ".alg", data.algebroid)
    doc.add("module", prefix + ".E", data.E)
    doc.add("module", prefix + ".C", data.C)
    doc.add("connection", prefix + ".nabla_c", data.nabla_c)
    doc.add("connection", prefix + ".nabla_s", data.nabla_s)
    doc.add("module", prefix + ".homEC", data.Omega.space.coeff)
    doc.add("form", prefix + ".omega", data.Omega)
    doc.add("superdata", prefix + ".data", data)
    return doc


def add_scalar_form(doc, sid, form):
    """Register a scalar-coefficient form, adding its coefficient module
    if needed."""
    space = form.space
    if doc._id_of(space.coeff, "module") is None:
        doc.add("module", sid + ".coeff", space.coeff)
    doc.add("form", sid, form)
    return sid
