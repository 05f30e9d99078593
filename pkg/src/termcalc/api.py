"""Request/response models and handlers shared by the HTTP service and the
command-line client.

Handlers take and return pydantic models; domain errors surface as the
package's ValueError subclasses and are mapped to transport-specific
failures (HTTP 422, exit code 2) by the callers.
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field

from . import boolean_terms as B
from . import lll as L
from . import ring_terms as R
from . import selftest
from . import terms as T
from .probability import bit_check, space_from_json, tuples_independent
from .rings import ring_from_name


class RingPsiRequest(BaseModel):
    term: str
    ring: str = "Z"


class RingPsiResponse(BaseModel):
    polynomial: dict
    rendered: str


def ring_psi(req: RingPsiRequest) -> RingPsiResponse:
    ring = ring_from_name(req.ring)
    poly = R.expand(R.parse(req.term, ring), ring)
    return RingPsiResponse(polynomial=poly.to_json(), rendered=poly.render())


class RingEquivRequest(BaseModel):
    left: str
    right: str
    ring: str = "Z"
    want_certificate: bool = False


class RingEquivResponse(BaseModel):
    equivalent: bool
    certificate: Optional[dict] = None


def ring_equiv(req: RingEquivRequest) -> RingEquivResponse:
    ring = ring_from_name(req.ring)
    t = R.parse(req.left, ring)
    u = R.parse(req.right, ring)
    if not req.want_certificate:
        return RingEquivResponse(equivalent=R.equivalent(t, u, ring))
    cert = R.equivalence_certificate(t, u, ring)
    if cert is None:
        return RingEquivResponse(equivalent=False)
    return RingEquivResponse(equivalent=True,
                             certificate=R.certificate_to_json(cert, ring))


class RingNormalizeRequest(BaseModel):
    term: str
    ring: str = "Z"
    want_certificate: bool = False


class RingNormalizeResponse(BaseModel):
    normal_form: str
    polynomial: dict
    rendered: str
    certificate: Optional[dict] = None


def ring_normalize(req: RingNormalizeRequest) -> RingNormalizeResponse:
    ring = ring_from_name(req.ring)
    form, cert = R.normalize(R.parse(req.term, ring), ring)
    return RingNormalizeResponse(
        normal_form=T.serialize(form.term),
        polynomial=form.polynomial.to_json(),
        rendered=form.polynomial.render(),
        certificate=R.certificate_to_json(cert, ring) if req.want_certificate else None,
    )


class CertVerifyRequest(BaseModel):
    certificate: dict
    ring: Optional[str] = None


class CertVerifyResponse(BaseModel):
    valid: bool
    failed_step: Optional[int] = None
    reason: Optional[str] = None


def cert_verify(req: CertVerifyRequest) -> CertVerifyResponse:
    kind = req.certificate.get("kind", "ring")
    if kind == "bool":
        result = B.verify(B.certificate_from_json(req.certificate))
    else:
        ring = ring_from_name(req.ring or req.certificate.get("ring", "Z"))
        result = R.verify(R.certificate_from_json(req.certificate, ring), ring)
    return CertVerifyResponse(valid=result.ok, failed_step=result.failed_step,
                              reason=result.reason)


class BoolDnfRequest(BaseModel):
    term: str
    width: Optional[int] = None
    want_certificate: bool = False


class BoolDnfResponse(BaseModel):
    dnf: str
    width: int
    monomials: list[dict]
    certificate: Optional[dict] = None


def bool_dnf(req: BoolDnfRequest) -> BoolDnfResponse:
    t = B.parse(req.term)
    dnf, cert = B.to_dnf(t, req.width)
    return BoolDnfResponse(
        dnf=T.serialize(dnf.term()),
        width=dnf.width,
        monomials=[{"vars": list(m.vars), "negated": list(m.negated)}
                   for m in dnf.monomials],
        certificate=B.certificate_to_json(cert) if req.want_certificate else None,
    )


class BoolEvalRequest(BaseModel):
    term: str
    assignment: list[int] = Field(description="0/1 value per variable, x1 first")


class BoolEvalResponse(BaseModel):
    value: int


def bool_eval(req: BoolEvalRequest) -> BoolEvalResponse:
    t = B.parse(req.term)
    return BoolEvalResponse(value=B.evaluate(t, B.BITS, req.assignment))


class ProbSpace(BaseModel):
    outcomes: list[str]
    weights: list[str]
    events: dict[str, list[int]] = Field(default_factory=dict)


class ProbIndepRequest(BaseModel):
    space: ProbSpace
    left: list[str]
    right: list[str]


class ProbIndepResponse(BaseModel):
    independent: bool
    witness: Optional[dict] = None


def prob_indep(req: ProbIndepRequest) -> ProbIndepResponse:
    space, events = space_from_json(req.space.model_dump())
    try:
        left = [events[name] for name in req.left]
        right = [events[name] for name in req.right]
    except KeyError as exc:
        raise ValueError(f"unknown event {exc.args[0]!r}") from None
    res = tuples_independent(space, left, right)
    witness = None
    if res.witness is not None:
        xs, ys = res.witness
        witness = {"left": [req.left[i] for i in xs],
                   "right": [req.right[i] for i in ys]}
    return ProbIndepResponse(independent=res.independent, witness=witness)


class ProbBitRequest(BaseModel):
    space: ProbSpace
    term_left: str
    term_right: str
    left: list[str]
    right: list[str]


class ProbBitResponse(BaseModel):
    ok: bool
    pr_joint: str
    pr_left: str
    pr_right: str
    checks: dict[str, bool]


def prob_bit(req: ProbBitRequest) -> ProbBitResponse:
    space, events = space_from_json(req.space.model_dump())
    left = [events[name] for name in req.left]
    right = [events[name] for name in req.right]
    report = bit_check(space, B.parse(req.term_left), B.parse(req.term_right),
                       left, right)
    return ProbBitResponse(
        ok=report.ok,
        pr_joint=str(report.pr_joint),
        pr_left=str(report.pr_left),
        pr_right=str(report.pr_right),
        checks={
            "product": report.product_ok,
            "dnf_left": report.dnf_left_ok,
            "dnf_right": report.dnf_right_ok,
            "conjunction": report.conjunction_ok,
            "disjoint": report.disjoint_ok,
            "sum": report.sum_ok,
            "factorization": report.factorization_ok,
            "marginals": report.marginals_ok,
        },
    )


class LllRequest(BaseModel):
    hypergraph: dict
    exhaustive: bool = True


class LllResponse(BaseModel):
    ok: bool
    edge_probabilities: dict[str, str]
    tuple_independence_ok: bool
    pairs: list[dict]
    condition: str
    condition_holds: bool
    proper_coloring: Optional[str] = None
    searched: bool


def lll_verify(req: LllRequest) -> LllResponse:
    h = L.Hypergraph.from_json(req.hypergraph)
    report = L.verify_lll_hypothesis(h, exhaustive=req.exhaustive)
    return LllResponse(
        ok=report.ok,
        edge_probabilities={str(list(e)): str(p)
                            for e, p in report.edge_probabilities.items()},
        tuple_independence_ok=report.tuple_independence_ok,
        pairs=[{
            "edge": list(r.edge), "other": list(r.other),
            "disjoint": r.disjoint,
            "pr_joint": str(r.pr_joint), "pr_product": str(r.pr_product),
            "factored": r.factored, "bit_ok": r.bit_ok,
        } for r in report.pair_reports],
        condition=report.condition_text,
        condition_holds=report.condition_holds,
        proper_coloring=report.proper_coloring,
        searched=report.searched,
    )


class SelftestRequest(BaseModel):
    seed: int = 0
    samples: int = 200


class SelftestResponse(BaseModel):
    ok: bool
    lines: list[str]


def run_selftest(req: SelftestRequest) -> SelftestResponse:
    ok, lines = selftest.run(req.seed, req.samples)
    return SelftestResponse(ok=ok, lines=lines)
