"""Command-line client.

Thin wrapper over the same request/response models the HTTP service uses;
by default handlers run in-process, with --server the requests go over
HTTP to a running service instead.

Exit codes: 0 success or true verdict, 1 false verdict (not equivalent,
not independent, failed check), 2 malformed input.
"""

from __future__ import annotations

import json
import sys

import click
from pydantic import BaseModel

from . import api

ROUTES = {
    api.RingPsiRequest: "/ring/psi",
    api.RingEquivRequest: "/ring/equiv",
    api.RingNormalizeRequest: "/ring/normalize",
    api.CertVerifyRequest: "/certificates/verify",
    api.BoolDnfRequest: "/bool/dnf",
    api.BoolEvalRequest: "/bool/eval",
    api.ProbIndepRequest: "/prob/independence",
    api.ProbBitRequest: "/prob/bit",
    api.LllRequest: "/lll",
    api.SelftestRequest: "/selftest",
}

HANDLERS = {
    api.RingPsiRequest: (api.ring_psi, api.RingPsiResponse),
    api.RingEquivRequest: (api.ring_equiv, api.RingEquivResponse),
    api.RingNormalizeRequest: (api.ring_normalize, api.RingNormalizeResponse),
    api.CertVerifyRequest: (api.cert_verify, api.CertVerifyResponse),
    api.BoolDnfRequest: (api.bool_dnf, api.BoolDnfResponse),
    api.BoolEvalRequest: (api.bool_eval, api.BoolEvalResponse),
    api.ProbIndepRequest: (api.prob_indep, api.ProbIndepResponse),
    api.ProbBitRequest: (api.prob_bit, api.ProbBitResponse),
    api.LllRequest: (api.lll_verify, api.LllResponse),
    api.SelftestRequest: (api.run_selftest, api.SelftestResponse),
}


def call(ctx, request: BaseModel) -> BaseModel:
    handler, response_model = HANDLERS[type(request)]
    server = ctx.obj.get("server")
    if not server:
        try:
            return handler(request)
        except ValueError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
    import httpx  # only needed in client/server mode

    url = server.rstrip("/") + ROUTES[type(request)]
    reply = httpx.post(url, json=request.model_dump(), timeout=300.0)
    if reply.status_code == 422:
        click.echo(f"error: {reply.json().get('detail', reply.text)}", err=True)
        sys.exit(2)
    reply.raise_for_status()
    return response_model.model_validate(reply.json())


def emit(ctx, response: BaseModel, human: str) -> None:
    if ctx.obj.get("json"):
        click.echo(response.model_dump_json(exclude_none=True))
    else:
        click.echo(human)


def write_certificate(path, cert: dict | None) -> None:
    if path and cert is not None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(cert, fh, indent=2)


@click.group()
@click.option("--json", "as_json", is_flag=True, help="machine-readable output")
@click.option("--server", default=None, metavar="URL",
              help="send requests to a running termcalc service")
@click.pass_context
def main(ctx, as_json, server):
    """Ring and Boolean term calculator."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json
    ctx.obj["server"] = server


@main.group()
def ring():
    """Ring-term operations."""


@ring.command("psi")
@click.argument("term")
@click.option("--ring", "ring_name", default="Z", help="Z, Zm:<m> or Q")
@click.pass_context
def ring_psi(ctx, term, ring_name):
    """Expand a term into its sparse polynomial."""
    resp = call(ctx, api.RingPsiRequest(term=term, ring=ring_name))
    emit(ctx, resp, resp.rendered)


@ring.command("equiv")
@click.argument("left")
@click.argument("right")
@click.option("--ring", "ring_name", default="Z")
@click.option("--certificate", "cert_path", default=None, type=click.Path(),
              help="write the rewrite certificate to this JSON file")
@click.pass_context
def ring_equiv(ctx, left, right, ring_name, cert_path):
    """Decide equivalence of two terms; exit 1 when not equivalent."""
    req = api.RingEquivRequest(left=left, right=right, ring=ring_name,
                               want_certificate=cert_path is not None)
    resp = call(ctx, req)
    write_certificate(cert_path, resp.certificate)
    emit(ctx, resp, "equivalent" if resp.equivalent else "not equivalent")
    if not resp.equivalent:
        sys.exit(1)


@ring.command("normalize")
@click.argument("term")
@click.option("--ring", "ring_name", default="Z")
@click.option("--certificate", "cert_path", default=None, type=click.Path())
@click.pass_context
def ring_normalize(ctx, term, ring_name, cert_path):
    """Reduce a term to its canonical sum-of-monomials form."""
    req = api.RingNormalizeRequest(term=term, ring=ring_name,
                                   want_certificate=cert_path is not None)
    resp = call(ctx, req)
    write_certificate(cert_path, resp.certificate)
    emit(ctx, resp, f"{resp.normal_form}\n= {resp.rendered}")


@ring.command("cert-verify")
@click.argument("path", type=click.Path(exists=True))
@click.option("--ring", "ring_name", default=None)
@click.pass_context
def ring_cert_verify(ctx, path, ring_name):
    """Replay a certificate file; exit 1 when it does not verify."""
    _cert_verify(ctx, path, ring_name)


def _cert_verify(ctx, path, ring_name):
    with open(path, encoding="utf-8") as fh:
        cert = json.load(fh)
    resp = call(ctx, api.CertVerifyRequest(certificate=cert, ring=ring_name))
    if resp.valid:
        emit(ctx, resp, "certificate verifies")
    else:
        emit(ctx, resp, f"invalid at step {resp.failed_step}: {resp.reason}")
        sys.exit(1)


@main.group("bool")
def bool_():
    """Boolean-term operations."""


@bool_.command("dnf")
@click.argument("term")
@click.option("--width", type=int, default=None,
              help="number of variables (defaults to the largest index used)")
@click.option("--certificate", "cert_path", default=None, type=click.Path())
@click.pass_context
def bool_dnf(ctx, term, width, cert_path):
    """Normalize to the canonical disjunctive normal form."""
    req = api.BoolDnfRequest(term=term, width=width,
                             want_certificate=cert_path is not None)
    resp = call(ctx, req)
    write_certificate(cert_path, resp.certificate)
    emit(ctx, resp, resp.dnf)


@bool_.command("eval")
@click.argument("term")
@click.option("--assign", required=True,
              help="comma-separated 0/1 values, x1 first (e.g. 1,0,1)")
@click.pass_context
def bool_eval(ctx, term, assign):
    """Evaluate under a 0/1 assignment."""
    values = [int(v) for v in assign.split(",") if v != ""]
    resp = call(ctx, api.BoolEvalRequest(term=term, assignment=values))
    emit(ctx, resp, str(resp.value))


@bool_.command("cert-verify")
@click.argument("path", type=click.Path(exists=True))
@click.pass_context
def bool_cert_verify(ctx, path):
    """Replay a Boolean certificate file; exit 1 when invalid."""
    _cert_verify(ctx, path, None)


@main.group()
def prob():
    """Probability-space operations."""


def _load_space(path) -> api.ProbSpace:
    with open(path, encoding="utf-8") as fh:
        return api.ProbSpace.model_validate(json.load(fh))


@prob.command("indep")
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--left", required=True, help="comma-separated event names")
@click.option("--right", required=True)
@click.pass_context
def prob_indep(ctx, space_path, left, right):
    """Check tuple independence; exit 1 when not independent."""
    req = api.ProbIndepRequest(space=_load_space(space_path),
                               left=left.split(","), right=right.split(","))
    resp = call(ctx, req)
    emit(ctx, resp, "independent" if resp.independent
         else f"not independent, witness {resp.witness}")
    if not resp.independent:
        sys.exit(1)


@prob.command("bit")
@click.option("--space", "space_path", required=True, type=click.Path(exists=True))
@click.option("--term-left", required=True)
@click.option("--term-right", required=True)
@click.option("--left", required=True, help="comma-separated event names")
@click.option("--right", required=True)
@click.pass_context
def prob_bit(ctx, space_path, term_left, term_right, left, right):
    """Independence of term-built events, with the proof-pipeline checks."""
    req = api.ProbBitRequest(space=_load_space(space_path),
                             term_left=term_left, term_right=term_right,
                             left=left.split(","), right=right.split(","))
    resp = call(ctx, req)
    emit(ctx, resp,
         f"Pr(a∧b)={resp.pr_joint} Pr(a)={resp.pr_left} Pr(b)={resp.pr_right}"
         f" -> {'ok' if resp.ok else 'FAILED'}")
    if not resp.ok:
        sys.exit(1)


@main.command("lll")
@click.option("--hypergraph", "hg_path", required=True, type=click.Path(exists=True))
@click.option("--exhaustive/--no-exhaustive", default=True,
              help="search every coloring (vertex count permitting)")
@click.pass_context
def lll_cmd(ctx, hg_path, exhaustive):
    """Verify the independence hypothesis on a hypergraph coloring space."""
    with open(hg_path, encoding="utf-8") as fh:
        hg = json.load(fh)
    resp = call(ctx, api.LllRequest(hypergraph=hg, exhaustive=exhaustive))
    lines = [f"edge probabilities: {resp.edge_probabilities}",
             f"independence of disjoint-edge tuples: "
             f"{'ok' if resp.tuple_independence_ok else 'FAILED'}",
             resp.condition]
    if resp.searched:
        lines.append(f"proper coloring: {resp.proper_coloring or 'none found'}")
    lines.append("ok" if resp.ok else "FAILED")
    emit(ctx, resp, "\n".join(lines))
    if not resp.ok:
        sys.exit(1)


@main.command("selftest")
@click.option("--seed", type=int, default=0)
@click.option("--samples", type=int, default=200)
@click.pass_context
def selftest_cmd(ctx, seed, samples):
    """Run the bundled invariant suites."""
    resp = call(ctx, api.SelftestRequest(seed=seed, samples=samples))
    emit(ctx, resp, "\n".join(resp.lines))
    if not resp.ok:
        sys.exit(1)


if __name__ == "__main__":
    main()
