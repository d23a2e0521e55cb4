"""Command line driver: ``relpib verify|scan|thresholds|reduce|absindex``.

Every subcommand writes JSON lines (``schema: 1``) to stdout and a short
summary to stderr.  Exit codes: 0 ok, 2 anomaly, 3 precision exhausted,
4 input error.
"""
from __future__ import annotations

import argparse
import enum
import hashlib
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

from flint import arb, ctx

from .absindex import Alpha0, admissible_for_absindex, j_alpha_divisibility
from .balls import DEFAULT_PREC, rel_width, to_json
from .bennett import LAMBDA_WINDOW, LARGE_C, bennett_params, resolve_large_c, thue_solutions_large_c, \
    trivial_solution_set, two_minus_lambda
from .errors import AnomalyError, DomainError, InapplicableError, ParseError, PrecisionError, RelPibError
from .forms import GeneratorTriple, QuarticParams, generator_from_pq, is_relative_generator, \
    known_generators, normalize_generator
from .linforms import BW_M_MAX, BW_N_MAX, bw_constant, bw_global_bounds, bw_threshold, normalize_c
from .oracle import CaseStatus, brute_system, brute_thue, intersection_roots, special_case_c1
from .pell import admissible_mu_eps
from .reduce import finish_small_indices, reduce_for_c, search_box
from .ring import QuadInt, RingSpec, enumerate_disk, in_Sc, is_excluded, parse_element, units

SCHEMA = 1
EXIT_OK, EXIT_ANOMALY, EXIT_PRECISION, EXIT_INPUT = 0, 2, 3, 4
REDUCE_LIMIT = 200
CHECKPOINT_EVERY = 100


class Classification(enum.Enum):
    Excluded_0_pm2 = "Excluded_0_pm2"
    InSc = "InSc"
    ReZero_Closed = "ReZero_Closed"
    LargeC_Bennett = "LargeC_Bennett"
    Reduced_And_Searched = "Reduced_And_Searched"


def _gen_key(g: GeneratorTriple):
    return tuple(a.sort_key() for a in g)


@dataclass
class VerifyReport:
    ring: RingSpec
    c: QuadInt
    classification: Classification
    closed: bool = False
    mu_cases: list = field(default_factory=list)
    bennett: Optional[dict] = None
    reduction: Optional[list] = None
    search: Optional[dict] = None
    generators: list = field(default_factory=list)
    note: str = ""

    def to_json(self) -> dict:
        return {
            "schema": SCHEMA,
            "kind": "verify",
            "ring": {"D": self.ring.D, "convention": self.ring.convention.value},
            "c": str(self.c),
            "classification": self.classification.value,
            "closed": self.closed,
            "mu_cases": self.mu_cases,
            "bounds": {"bennett": self.bennett, "reduction": self.reduction, "search": self.search},
            "generators": [g.to_strs() for g in self.generators],
            "generators_pretty": [g.pretty() for g in self.generators],
            "note": self.note,
        }


def _trivial_mu_cases(ring: RingSpec, params: QuarticParams) -> tuple[list, list]:
    cases, gens = [], set()
    for me in admissible_mu_eps(ring):
        thue = thue_solutions_large_c(ring, me.mu)
        case_gens = sorted({normalize_generator(generator_from_pq(p, q, params)) for p, q in thue},
                           key=_gen_key)
        gens.update(case_gens)
        cases.append({
            "mu": str(me.mu),
            "eps": str(me.eps),
            "solutions": [[str(a) for a in t] for t in trivial_solution_set(ring, me.mu)],
            "thue": [[str(a) for a in t] for t in thue],
            "generators": [g.to_strs() for g in case_gens],
        })
    return cases, sorted(gens, key=_gen_key)


def _check_generators(gens: list, params: QuarticParams) -> list:
    expected = sorted(known_generators(params), key=_gen_key)
    if gens != expected:
        raise AnomalyError(f"generator classes {gens} differ from the expected {expected}")
    for g in gens:
        if not is_relative_generator(g, params):
            raise AnomalyError(f"{g} is not a relative generator")
    return gens


def cmd_verify(ring: RingSpec, c: QuadInt, prec: int = DEFAULT_PREC) -> VerifyReport:
    if is_excluded(c):
        return VerifyReport(ring, c, Classification.Excluded_0_pm2, closed=True,
                            note="f is reducible for c in {0, 2, -2}")
    params = QuarticParams(c)
    if in_Sc(c):
        rep = VerifyReport(ring, c, Classification.InSc)
        if c.y == 0 and ring.D in (1, 3):
            sc = special_case_c1(ring, 1 if c.x > 0 else -1)
            if sc.status is CaseStatus.Resolved:
                rep.closed = True
                rep.mu_cases = sc.to_json()["mu_cases"]
                rep.generators = _check_generators(sc.generators, params)
                rep.note = "c = +-1 resolved by factoring the Pell system"
                return rep
        rep.note = "exceptional parameter: the trivial-solution classification is not established"
        return rep
    mu_cases, gens = _trivial_mu_cases(ring, params)
    gens = _check_generators(gens, params)
    if c.x == 0:
        return VerifyReport(ring, c, Classification.ReZero_Closed, True, mu_cases, generators=gens,
                            note="u_m = +-u'_n has no solutions with m, n > 0 when Re(c) = 0")
    if c.norm() >= LARGE_C * LARGE_C:
        if not resolve_large_c(c):
            raise AnomalyError(f"|c| >= {LARGE_C} but the bounds do not exclude nontrivial solutions")
        rep = VerifyReport(ring, c, Classification.LargeC_Bennett, True, mu_cases, generators=gens)
        with ctx.workprec(prec):
            rep.bennett = bennett_params(c, prec).to_json()
        return rep
    if c.norm() > REDUCE_LIMIT * REDUCE_LIMIT:
        raise InapplicableError(f"{REDUCE_LIMIT} < |c| < {LARGE_C}: neither reduction nor the "
                                "large-|c| bound is certified here")
    cn, _ = normalize_c(c)
    first, second = reduce_for_c(cn)
    box = search_box(first, second)
    hits = finish_small_indices(cn, box, box)
    if hits:
        raise AnomalyError(f"u_m = +-u'_n at c = {cn}: {hits}")
    return VerifyReport(ring, c, Classification.Reduced_And_Searched, True, mu_cases,
                        reduction=[first.to_json(), second.to_json()],
                        search={"c_normalized": str(cn), "box": box, "hits": []},
                        generators=gens)


# -- scan -----------------------------------------------------------------------------


def _pairs(items):
    return [[str(a) for a in t] for t in items]


def cmd_scan(ring: RingSpec, radius, m_max: int, H, thue_H=None) -> dict:
    """Exhaustive checks over the disk ``|c| <= radius``; raises AnomalyError on any mismatch."""
    if m_max > 64:
        raise DomainError("m_max must be at most 64")
    thue_H = H if thue_H is None else thue_H
    out = {"schema": SCHEMA, "kind": "scan", "D": ring.D, "radius": str(radius), "m_max": m_max,
           "H": str(H), "checked": 0, "skipped_Sc": [], "skipped_excluded": [], "intersections": []}
    for c in enumerate_disk(ring, radius):
        if is_excluded(c):
            out["skipped_excluded"].append(str(c))
            continue
        if in_Sc(c):
            out["skipped_Sc"].append(str(c))
            continue
        for me in admissible_mu_eps(ring):
            sys_ = brute_system(c, me.mu, H)
            if sys_ != sorted(trivial_solution_set(ring, me.mu), key=lambda t: tuple(x.sort_key() for x in t)):
                raise AnomalyError(f"c = {c}, mu = {me.mu}: extra system solutions {_pairs(sys_)}")
            thue = brute_thue(c, me.mu, thue_H)
            if thue != thue_solutions_large_c(ring, me.mu):
                raise AnomalyError(f"c = {c}, mu = {me.mu}: unexpected Thue solutions {_pairs(thue)}")
        out["checked"] += 1
    allowed = {ring.zero, ring.of(2), ring.of(-2)}
    for m in range(1, m_max + 1):
        for n in range(1, m_max + 1):
            for sign in (1, -1):
                for c in intersection_roots(m, n, sign, ring, radius):
                    if c in allowed:
                        out["intersections"].append([m, n, sign, str(c)])
                    elif in_Sc(c):
                        out["intersections"].append([m, n, sign, str(c)])
                        out.setdefault("Sc_intersections", []).append(str(c))
                    else:
                        raise AnomalyError(f"u_{m} = {sign} u'_{n} at c = {c}")
    return out


# -- thresholds -------------------------------------------------------------------------


def _ball(x: arb, prec: int) -> dict:
    d = to_json(x, prec)
    d["rel_width"] = rel_width(x)
    return d


def cmd_thresholds(prec: int = 256) -> dict:
    with ctx.workprec(prec):
        below = two_minus_lambda(arb(LAMBDA_WINDOW - 1))
        above = two_minus_lambda(arb(LAMBDA_WINDOW))
        if not (below < 0 and above > 0):
            raise PrecisionError("sign change of 2 - lambda not certified", "2 - lambda", prec)
        fail = bennett_params(LARGE_C - 1, prec)
        ok = bennett_params(LARGE_C, prec)
        if fail.excludes_nontrivial or not ok.excludes_nontrivial:
            raise AnomalyError("the exclusion threshold is not at 159108")
        K = bw_constant(prec)
        caps = bw_global_bounds(prec)
        m_thr = bw_threshold(Fraction(3))
        n_thr = bw_threshold(Fraction(155, 100))
        return {
            "schema": SCHEMA, "kind": "thresholds", "prec_bits": prec,
            "two_minus_lambda": {str(LAMBDA_WINDOW - 1): _ball(below, prec), str(LAMBDA_WINDOW): _ball(above, prec)},
            "exclusion": {
                "threshold": LARGE_C,
                "margin_at_" + str(LARGE_C - 1): _ball(fail.lower_log_U - fail.upper_log_U, prec),
                "margin_at_" + str(LARGE_C): _ball(ok.lower_log_U - ok.upper_log_U, prec),
                "lower_log_U": _ball(ok.lower_log_U, prec),
                "upper_log_U": _ball(ok.upper_log_U, prec),
            },
            "bw_constant": _ball(K, prec),
            "bw_constant_cap": "8.6e34",
            "m_cap": "6.7e36", "n_cap": "1.715e37",
            "m_cap_int": str(caps[0]), "n_cap_int": str(caps[1]),
            "m_threshold": f"{m_thr:.6e}", "n_threshold": f"{n_thr:.6e}",
        }


# -- reduce batches -----------------------------------------------------------------------


@dataclass
class Job:
    line: int
    D: int
    c_text: str


def parse_jobs(lines: Iterable[str]) -> tuple[list[Job], list[dict]]:
    """``D c`` per line (``D,c`` also accepted); blank lines and ``#`` comments skipped."""
    jobs, errors = [], []
    for no, raw in enumerate(lines, 1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.replace(",", " ").split()
        try:
            if len(parts) != 2:
                raise ParseError("expected 'D c'")
            D = int(parts[0])
            parse_element(parts[1], RingSpec(D))
            jobs.append(Job(no, D, parts[1]))
        except (ValueError, RelPibError) as exc:
            errors.append({"schema": SCHEMA, "kind": "reduce", "line": no, "status": "InputError",
                           "error": f"line {no}: {exc}"})
    return jobs, errors


def run_reduce_job(job: Job) -> dict:
    rec = {"schema": SCHEMA, "kind": "reduce", "line": job.line, "D": job.D, "c": job.c_text}
    try:
        ring = RingSpec(job.D)
        c = parse_element(job.c_text, ring)
        rec["c"] = str(c)
        cn, _ = normalize_c(c)
        first, second = reduce_for_c(cn)
        box = search_box(first, second)
        hits = finish_small_indices(cn, box, box)
        rec.update({
            "status": "Reduced" if not hits else "Anomaly",
            "final_bounds": [first.final_bound, second.final_bound],
            "search_box": box,
            "hits": [list(h) for h in hits],
            "outcomes": [first.to_json(), second.to_json()],
        })
    except PrecisionError as exc:
        rec.update({"status": "PrecisionExhausted", "error": str(exc), "quantity": exc.quantity})
    except AnomalyError as exc:
        rec.update({"status": "Anomaly", "error": str(exc)})
    except (DomainError, ParseError) as exc:
        rec.update({"status": "InputError", "error": f"line {job.line}: {exc}"})
    return rec


def _status_code(status: str) -> int:
    return {"Reduced": EXIT_OK, "Anomaly": EXIT_ANOMALY, "PrecisionExhausted": EXIT_PRECISION,
            "InputError": EXIT_INPUT}.get(status, EXIT_ANOMALY)


def _load_state(path: str, digest: str) -> dict:
    try:
        with open(path) as fh:
            state = json.load(fh)
    except (OSError, ValueError):
        return {}
    if state.get("jobs_sha256") != digest:
        return {}
    return {int(k): v for k, v in state.get("done", {}).items()}


def _save_state(path: str, digest: str, done: dict) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump({"jobs_sha256": digest, "done": {str(k): v for k, v in sorted(done.items())}}, fh)
    os.replace(tmp, path)


def cmd_reduce_batch(jobfile: str, workers: int = 1, state_path: Optional[str] = None,
                     emit=print) -> int:
    with open(jobfile) as fh:
        text = fh.read()
    digest = hashlib.sha256(text.encode()).hexdigest()
    jobs, errors = parse_jobs(text.splitlines())
    state_path = state_path or jobfile + ".state"
    done = _load_state(state_path, digest) if jobs else {}
    todo = [j for j in jobs if j.line not in done]
    records = {e["line"]: e for e in errors}
    records.update(done)
    for start in range(0, len(todo), CHECKPOINT_EVERY):
        chunk = todo[start:start + CHECKPOINT_EVERY]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(run_reduce_job, chunk))
        else:
            results = [run_reduce_job(j) for j in chunk]
        for job, rec in zip(chunk, results):
            done[job.line] = rec
            records[job.line] = rec
        _save_state(state_path, digest, done)
    codes = set()
    for line in sorted(records):
        rec = records[line]
        emit(json.dumps(rec))
        codes.add(_status_code(rec["status"]))
    # an anomaly outranks precision trouble, which outranks bad input
    code = next((k for k in (EXIT_ANOMALY, EXIT_PRECISION, EXIT_INPUT) if k in codes), EXIT_OK)
    n_ok = sum(1 for r in records.values() if r["status"] == "Reduced")
    print(f"reduce: {n_ok}/{len(records)} items reduced and searched", file=sys.stderr)
    return code


# -- absolute index ------------------------------------------------------------------------


def absindex_eps(ring: RingSpec) -> list[QuadInt]:
    """``+-1``, plus ``+-i`` for D = 1."""
    return [u for u in units(ring) if ring.D == 1 or u.y == 0]


def cmd_absindex(D: int, pmax: int, qmax: int, bmax: int) -> list[dict]:
    if not admissible_for_absindex(D):
        raise InapplicableError(f"-D = 1 (mod 4) for D = {D}: absolute index not covered")
    ring = RingSpec(D)
    out = []
    for p in range(-pmax, pmax + 1):
        for q in range(-qmax, qmax + 1):
            if is_excluded(ring(p, q)):
                continue
            for b in range(-bmax, bmax + 1):
                for eps in absindex_eps(ring):
                    for a0 in Alpha0:
                        v = j_alpha_divisibility(D, p, q, b, eps, a0)
                        rec = {"schema": SCHEMA, "kind": "absindex", **v.to_json()}
                        out.append(rec)
    return out


# -- entry point ------------------------------------------------------------------------


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="relpib", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="cmd", required=True)
    v = sub.add_parser("verify", help="classify one c and list the generators")
    v.add_argument("--D", type=int, required=True)
    v.add_argument("--c", required=True, help='element as "a+b*w"')
    v.add_argument("--prec", type=int, default=DEFAULT_PREC)
    s = sub.add_parser("scan", help="exhaustive oracle checks over a disk of c")
    s.add_argument("--D", type=int, required=True)
    s.add_argument("--radius", type=Fraction, required=True)
    s.add_argument("--mmax", type=int, default=12)
    s.add_argument("--H", type=Fraction, default=Fraction(6))
    t = sub.add_parser("thresholds", help="recompute the certified constants")
    t.add_argument("--prec", type=int, default=256)
    r = sub.add_parser("reduce", help="run reductions for a job file of 'D c' lines")
    r.add_argument("--jobs", required=True)
    r.add_argument("--workers", type=int, default=1)
    r.add_argument("--state", default=None, help="checkpoint file (default: <jobs>.state)")
    a = sub.add_parser("absindex", help="divisibility sweep for J(alpha)")
    a.add_argument("--D", type=int, required=True)
    a.add_argument("--pmax", type=int, default=3)
    a.add_argument("--qmax", type=int, default=3)
    a.add_argument("--bmax", type=int, default=3)
    return ap


def _dump(rec: dict) -> None:
    print(json.dumps(rec))


def main(argv: Optional[list[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.cmd == "verify":
            ring = RingSpec(args.D)
            rep = cmd_verify(ring, parse_element(args.c, ring), args.prec)
            _dump(rep.to_json())
            print(f"c = {rep.c.pretty()} (D={ring.D}): {rep.classification.value}, "
                  f"closed={rep.closed}, generators: {', '.join(g.pretty() for g in rep.generators)}",
                  file=sys.stderr)
            return EXIT_OK
        if args.cmd == "scan":
            rep = cmd_scan(RingSpec(args.D), args.radius, args.mmax, args.H)
            _dump(rep)
            print(f"scan D={args.D}: {rep['checked']} parameters checked, no anomalies", file=sys.stderr)
            return EXIT_OK
        if args.cmd == "thresholds":
            rep = cmd_thresholds(args.prec)
            _dump(rep)
            print(f"thresholds certified: 2-lambda changes sign at {LAMBDA_WINDOW}, exclusion from {LARGE_C}, "
                  f"K < 8.6e34, m < 6.7e36, n < 1.715e37", file=sys.stderr)
            return EXIT_OK
        if args.cmd == "reduce":
            return cmd_reduce_batch(args.jobs, args.workers, args.state)
        if args.cmd == "absindex":
            recs = cmd_absindex(args.D, args.pmax, args.qmax, args.bmax)
            bad = 0
            for rec in recs:
                _dump(rec)
                bad += not (rec["divisible_4096D2"] and rec["divisible_256"])
            print(f"absindex D={args.D}: {len(recs) - bad}/{len(recs)} verdicts divisible", file=sys.stderr)
            return EXIT_ANOMALY if bad else EXIT_OK
    except AnomalyError as exc:
        print(f"anomaly: {exc}", file=sys.stderr)
        return EXIT_ANOMALY
    except PrecisionError as exc:
        print(f"precision exhausted while certifying {exc.quantity or 'a quantity'}: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except (RelPibError, ValueError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
