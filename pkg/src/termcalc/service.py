"""FastAPI wrapper around the handler layer.

Run with:  uvicorn termcalc.service:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

from . import api

app = FastAPI(title="termcalc", version="0.1.0",
              description="Ring/Boolean term calculator: certified equivalence, "
                          "DNF normalization, exact independence checks")


def _guard(fn, request):
    try:
        return fn(request)
    except ValueError as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/ring/psi", response_model=api.RingPsiResponse)
def ring_psi(request: api.RingPsiRequest):
    return _guard(api.ring_psi, request)


@app.post("/ring/equiv", response_model=api.RingEquivResponse)
def ring_equiv(request: api.RingEquivRequest):
    return _guard(api.ring_equiv, request)


@app.post("/ring/normalize", response_model=api.RingNormalizeResponse)
def ring_normalize(request: api.RingNormalizeRequest):
    return _guard(api.ring_normalize, request)


@app.post("/certificates/verify", response_model=api.CertVerifyResponse)
def cert_verify(request: api.CertVerifyRequest):
    return _guard(api.cert_verify, request)


@app.post("/bool/dnf", response_model=api.BoolDnfResponse)
def bool_dnf(request: api.BoolDnfRequest):
    return _guard(api.bool_dnf, request)


@app.post("/bool/eval", response_model=api.BoolEvalResponse)
def bool_eval(request: api.BoolEvalRequest):
    return _guard(api.bool_eval, request)


@app.post("/prob/independence", response_model=api.ProbIndepResponse)
def prob_indep(request: api.ProbIndepRequest):
    return _guard(api.prob_indep, request)


@app.post("/prob/bit", response_model=api.ProbBitResponse)
def prob_bit(request: api.ProbBitRequest):
    return _guard(api.prob_bit, request)


@app.post("/lll", response_model=api.LllResponse)
def lll(request: api.LllRequest):
    return _guard(api.lll_verify, request)


@app.post("/selftest", response_model=api.SelftestResponse)
def selftest(request: api.SelftestRequest):
    return api.run_selftest(request)
