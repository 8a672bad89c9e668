"""Command line front end: ``tbf <finite|abelian|extension|corpus> [flags]``.

Exit codes: 0 when every requested check passes, 1 on a verification failure,
2 on bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from tbf import formats
from tbf.errors import InputError, TBFError, VerificationError

EXIT_OK, EXIT_VERIFY, EXIT_INPUT = 0, 1, 2

ALLOWED = {
    "finite": {"reidemeister", "sequence", "congruence", "tbft", "properties"},
    "abelian": {"reidemeister", "sequence", "congruence", "separate"},
    "extension": {"reidemeister", "sequence", "congruence", "tbft", "separate", "certify", "properties"},
}


@dataclass
class JobSpec:
    kind: str
    group: object = None            # path, JSON string or dict
    endo: object = None
    matrix: object = None
    commands: list = field(default_factory=list)     # (name, arg)
    name: str = "job"
    expect: dict = field(default_factory=dict)
    base: Path = None               # directory for relative file references

    def __post_init__(self):
        if self.kind not in ALLOWED:
            raise InputError(f"unknown job kind {self.kind!r}")
        for cmd, _ in self.commands:
            if cmd not in ALLOWED[self.kind]:
                raise InputError(f"command {cmd!r} is not available for {self.kind} jobs")

    @classmethod
    def from_json(cls, data, base=None):
        cmds = []
        for c in data.get("commands", ["reidemeister"]):
            if isinstance(c, str):
                cmds.append((c, None))
            elif isinstance(c, dict) and len(c) == 1:
                (k, v), = c.items()
                cmds.append((k, int(v)))
            else:
                raise InputError(f"bad command entry {c!r}")
        return cls(
            kind=data.get("kind", ""),
            group=data.get("group"),
            endo=data.get("endo"),
            matrix=data.get("matrix"),
            commands=cmds,
            name=data.get("name", "job"),
            expect=data.get("expect", {}),
            base=base,
        )


@dataclass
class JobResult:
    name: str
    kind: str
    records: list
    exit_code: int
    error: dict = None
    seconds: float = 0.0

    @property
    def ok(self):
        return self.exit_code == EXIT_OK

    def to_json(self):
        out = {"job": self.name, "kind": self.kind, "ok": self.ok, "exit_code": self.exit_code}
        if self.error:
            out["error"] = self.error
        out["records"] = self.records
        return out


def _resolve(ref, base):
    if isinstance(ref, str) and base is not None and not ref.lstrip().startswith(("{", "[")):
        p = Path(ref)
        if not p.is_absolute():
            return base / p
    return ref


def _error_record(exc):
    rec = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("witness", "field", "x", "y", "f", "f1", "f2", "n", "k", "d"):
        if hasattr(exc, attr):
            rec[attr] = getattr(exc, attr)
    return json.loads(formats.dumps(rec))


# per-kind command runners ------------------------------------------------------------


def _finite_records(job):
    from tbf.characters import character_table, tbft_verify
    from tbf.congruence import ReidemeisterSequence, gauss_congruence_check, periodic_orbit_decomposition
    from tbf.groups import identity_endo
    from tbf.properties import finite_property_suite
    from tbf.twisted import reidemeister_report

    G = formats.parse_group(_resolve(job.group, job.base))
    phi = identity_endo(G) if job.endo is None else formats.parse_endo(G, _resolve(job.endo, job.base))
    rep = reidemeister_report(G, phi)
    yield {"command": "reidemeister", "passed": True, "R": rep.number, "reps": list(rep.partition.reps),
           "rep_labels": [G.label(r) for r in rep.partition.reps], "classes": rep.partition.classes()}
    for cmd, arg in job.commands:
        if cmd == "sequence":
            yield {"command": "sequence", "passed": True,
                   "values": [reidemeister_report(G, phi, n).number for n in range(1, arg + 1)]}
        elif cmd == "congruence":
            seq = ReidemeisterSequence.from_function(lambda n: reidemeister_report(G, phi, n).number, arg)
            yield _congruence_record(seq, gauss_congruence_check, periodic_orbit_decomposition)
        elif cmd == "tbft":
            r = tbft_verify(G, phi, arg, character_table(G))
            yield {"command": "tbft", "passed": r.passed, "rows": r.to_json()["rows"]}
        elif cmd == "properties":
            props = finite_property_suite(G, phi)
            yield {"command": "properties", "passed": all(p.passed for p in props),
                   "properties": [{"name": p.name, "passed": p.passed, "witness": p.witness, "details": p.details}
                                  for p in props]}


def _congruence_record(seq, check, decompose):
    rep = check(seq)
    rec = {"command": "congruence", "passed": rep.passed, "values": list(seq.values),
           "rows": rep.to_json()["rows"], "P": rep.P}
    if rep.passed:
        rec["orbits"] = [{"period": d, "orbits": c} for d, c in decompose(seq)]
    return rec


def _abelian_records(job):
    from tbf.abelian import (
        abelian_separating_quotient,
        fixed_subgroup_rank,
        reidemeister_number_fg_abelian,
        reidemeister_number_zn,
    )
    from tbf.congruence import ReidemeisterSequence, gauss_congruence_check, periodic_orbit_decomposition

    if job.matrix is not None:
        M = formats.parse_matrix(job.matrix)

        def R(n):
            return reidemeister_number_zn(M, n)

        yield {"command": "reidemeister", "passed": True, "R": R(1), "fixed_rank": fixed_subgroup_rank(M)}
    elif job.group is not None:
        fg = formats.parse_fg_abelian(_resolve(job.group, job.base))
        M = None

        def R(n):
            return reidemeister_number_fg_abelian(fg, n)

        yield {"command": "reidemeister", "passed": True, "R": R(1),
               "rank": fg.group.rank, "torsion": list(fg.group.torsion)}
    else:
        raise InputError("abelian jobs need --matrix or --group")
    for cmd, arg in job.commands:
        if cmd == "sequence":
            yield {"command": "sequence", "passed": True, "values": [R(n) for n in range(1, arg + 1)]}
        elif cmd == "congruence":
            seq = ReidemeisterSequence.from_function(R, arg, "abelian")
            yield _congruence_record(seq, gauss_congruence_check, periodic_orbit_decomposition)
        elif cmd == "separate":
            if M is None:
                raise InputError("--separate needs a Z^n matrix")
            sq = abelian_separating_quotient(M)
            yield {"command": "separate", "passed": True, "sublattice_hnf": [list(r) for r in sq.lattice.basis],
                   "invariant_factors": list(sq.invariant_factors), "order": sq.order, "R": sq.R}


def _extension_records(job):
    from tbf.congruence import ReidemeisterSequence, gauss_congruence_check, periodic_orbit_decomposition
    from tbf.extension import (
        build_separating_quotient,
        iterate_ext,
        reidemeister_extension_report,
        reidemeister_number_extension,
        shift_probe_finite,
        tbft_ff_certify,
    )
    from tbf.groups import compose, inner_auto
    from tbf.intlinalg import INFINITE
    from tbf.twisted import reidemeister_number

    data = formats.load_json(_resolve(job.group, job.base))
    if job.endo is not None:
        data = dict(data, endo=formats.load_json(_resolve(job.endo, job.base)))
    phi = formats.parse_extension(data)
    if not hasattr(phi, "psi"):
        raise InputError("extension definition has no 'endo'")
    rep = reidemeister_extension_report(phi)
    yield dict(command="reidemeister", passed=True, **rep.to_json())
    for cmd, arg in job.commands:
        if cmd == "sequence":
            yield {"command": "sequence", "passed": True,
                   "values": [reidemeister_number_extension(phi, n) for n in range(1, arg + 1)]}
        elif cmd == "congruence":
            seq = ReidemeisterSequence.from_function(lambda n: reidemeister_number_extension(phi, n), arg, "extension")
            yield _congruence_record(seq, gauss_congruence_check, periodic_orbit_decomposition)
        elif cmd == "separate":
            sq = build_separating_quotient(phi)
            yield {"command": "separate", "passed": True,
                   "sublattice_hnf": [list(r) for r in sq.sublattice.basis], "index": sq.sublattice.index,
                   "quotient_order": sq.order, "refinement_steps": sq.refinement_steps,
                   "fiber_lattices": {str(f): [list(r) for r in L.basis] for f, L in sq.fiber_lattices.items()}}
        elif cmd in ("certify", "tbft"):
            powers = range(1, (arg or 1) + 1) if cmd == "tbft" else [1]
            certs = []
            for n in powers:
                c = tbft_ff_certify(iterate_ext(phi, n) if n > 1 else phi).to_json()
                certs.append(dict(power=n, **c))
            yield {"command": cmd, "passed": all(c["certified"] for c in certs), "certificates": certs}
        elif cmd == "properties":
            if rep.value is INFINITE:
                yield {"command": "properties", "passed": True, "skipped": "R is infinite"}
                continue
            sq = build_separating_quotient(phi)
            Q, e = sq.quotient.group, sq.quotient.endo
            r = reidemeister_number(Q, e)
            bad = [g for g in range(Q.order) if reidemeister_number(Q, compose(inner_auto(Q, g), e)) != r]
            probe = shift_probe_finite(Q, e)
            yield {"command": "properties", "passed": not bad, "inner_twist_failures": bad[:10],
                   "shift_probe": {"classes": probe.classes, "distinct_shifts": probe.distinct_shifts,
                                   "stabilizer_indices": probe.stabilizer_indices}}


RUNNERS = {"finite": _finite_records, "abelian": _abelian_records, "extension": _extension_records}


def _check_expect(job, records):
    """Compare golden values; returns a list of mismatch descriptions."""
    bad = []
    by_cmd = {r["command"]: r for r in records}
    for key, want in job.expect.items():
        cmd, _, fld = key.partition(".")
        got = by_cmd.get(cmd, {}).get(fld or "R")
        got = json.loads(formats.dumps(got))
        if got != want:
            bad.append({"expect": key, "want": want, "got": got})
    return bad


def run_job(job: JobSpec) -> JobResult:
    t0 = time.perf_counter()
    records = []
    try:
        for rec in RUNNERS[job.kind](job):
            records.append(json.loads(formats.dumps(rec)))
    except InputError as exc:
        return JobResult(job.name, job.kind, records, EXIT_INPUT, _error_record(exc), time.perf_counter() - t0)
    except VerificationError as exc:
        return JobResult(job.name, job.kind, records, EXIT_VERIFY, _error_record(exc), time.perf_counter() - t0)
    mismatches = _check_expect(job, records)
    if mismatches:
        records.append({"command": "expect", "passed": False, "mismatches": mismatches})
    code = EXIT_OK if all(r.get("passed", True) for r in records) else EXIT_VERIFY
    return JobResult(job.name, job.kind, records, code, None, time.perf_counter() - t0)


# rendering ----------------------------------------------------------------------------


def _fmt(v):
    return "infinite" if v == "infinite" else str(v)


def render_table(res: JobResult) -> str:
    lines = [f"== {res.name} ({res.kind}) =="]
    if res.error:
        lines.append(f"ERROR {res.error['error']}: {res.error['message']}")
    for r in res.records:
        cmd = r["command"]
        flag = "ok" if r.get("passed", True) else "FAIL"
        if cmd == "reidemeister":
            extra = ""
            if "rep_labels" in r:
                extra = "  reps: " + ", ".join(r["rep_labels"])
            lines.append(f"R = {_fmt(r['R'])}{extra}")
        elif cmd == "sequence":
            lines.append("n  R(phi^n)")
            lines += [f"{n:<2} {_fmt(v)}" for n, v in enumerate(r["values"], 1)]
        elif cmd == "congruence":
            lines.append(f"congruences [{flag}]")
            lines.append("n  R        S_n      S_n mod n")
            for row, v in zip(r["rows"], r["values"]):
                lines.append(f"{row['n']:<2} {_fmt(v):<8} {row['S']:<8} {row['S_mod_n']}")
            if "orbits" in r:
                lines.append("orbits by period: " + ", ".join(f"{o['period']}:{o['orbits']}" for o in r["orbits"]))
        elif cmd == "tbft" and "rows" in r:
            lines.append(f"tbft [{flag}]")
            lines.append("n  R   f-points")
            lines += [f"{row['n']:<2} {row['R']:<3} {row['f_points']}" for row in r["rows"]]
        elif cmd in ("certify", "tbft"):
            for c in r["certificates"]:
                lines.append(
                    f"certificate power {c['power']}: R = {c['R']}, fixed characters = {c['fixed_characters']}, "
                    f"quotient order {c['quotient_order']}, {'certified' if c['certified'] else 'NOT certified'}"
                )
        elif cmd == "separate":
            lines.append(f"separating sublattice HNF {r['sublattice_hnf']}")
            order = r.get("quotient_order", r.get("order"))
            lines.append(f"quotient order {order}")
        elif cmd == "properties":
            lines.append(f"properties [{flag}]")
            for p in r.get("properties", []):
                lines.append(f"  {p['name']:<28} {'ok' if p['passed'] else 'FAIL'}")
            if "shift_probe" in r:
                sp = r["shift_probe"]
                lines.append(f"  inner twists {'ok' if not r['inner_twist_failures'] else 'FAIL'}; "
                             f"{sp['distinct_shifts']} distinct shifted classes")
        elif cmd == "expect":
            lines.append(f"golden mismatch: {r['mismatches']}")
    return "\n".join(lines)


def render_csv(res: JobResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if res.error:
        w.writerow(["error", res.error["error"], res.error["message"]])
    for r in res.records:
        cmd = r["command"]
        if cmd == "congruence":
            w.writerow(["n", "R", "S_n", "S_n_mod_n", "P_n", "P_n_over_n"])
            for row, v, p in zip(r["rows"], r["values"], r["P"]):
                w.writerow([row["n"], v, row["S"], row["S_mod_n"], p, p // row["n"] if row["S_mod_n"] == 0 else ""])
        elif cmd == "sequence":
            w.writerow(["n", "R"])
            for n, v in enumerate(r["values"], 1):
                w.writerow([n, v])
        elif cmd == "tbft" and "rows" in r:
            w.writerow(["n", "R", "f_points", "pass"])
            for row in r["rows"]:
                w.writerow([row["n"], row["R"], row["f_points"], row["pass"]])
        elif cmd == "reidemeister":
            w.writerow(["R"])
            w.writerow([r["R"]])
        else:
            w.writerow([cmd, "passed", r.get("passed", True)])
    return buf.getvalue()


def render(res: JobResult, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(res.to_json(), indent=2)
    if fmt == "csv":
        return render_csv(res)
    return render_table(res)


# corpus -------------------------------------------------------------------------------


def bundled_corpus_dir() -> Path:
    return Path(str(resources.files("tbf") / "data" / "corpus"))


def load_jobs(directory: Path) -> list:
    jobs = []
    for p in sorted(Path(directory).glob("*.json")):
        data = formats.load_json(p)
        for i, entry in enumerate(data if isinstance(data, list) else [data]):
            entry.setdefault("name", f"{p.stem}[{i}]" if isinstance(data, list) else p.stem)
            jobs.append(JobSpec.from_json(entry, base=p.parent))
    return jobs


def run_jobs(jobs, workers=1) -> list:
    if workers > 1 and len(jobs) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run_job, jobs))
    return [run_job(j) for j in jobs]


def run_corpus(suite="smoke", corpus_dir=None, workers=1, acceptance=None):
    """Run job files and (for the bundled corpus) the acceptance criteria.

    Returns ``(job_results, criteria, warnings)``.
    """
    from tbf.acceptance import run_acceptance

    notes = []
    directory = bundled_corpus_dir() if corpus_dir is None else Path(corpus_dir)
    if not directory.is_dir():
        raise InputError(f"corpus directory {directory} does not exist")
    jobs = load_jobs(directory)
    if not jobs:
        notes.append(f"no job files found in {directory}")
    results = run_jobs(jobs, workers)
    if acceptance is None:
        acceptance = corpus_dir is None
    criteria = run_acceptance(suite, workers) if acceptance else []
    return results, criteria, notes


# argument parsing -----------------------------------------------------------------------


def _parser():
    p = argparse.ArgumentParser(prog="tbf", description="Twisted classes, fixed characters and congruences.")
    sub = p.add_subparsers(dest="kind", required=True)

    def common(sp):
        sp.add_argument("--format", choices=["table", "json", "csv"], default="table")
        sp.add_argument("--out", help="write the report here instead of stdout")

    for kind in ("finite", "abelian", "extension"):
        sp = sub.add_parser(kind)
        sp.add_argument("--group", help="group (or extension / f.g. abelian) definition: JSON file or literal")
        sp.add_argument("--endo", help="endomorphism definition: JSON file or literal")
        if kind == "abelian":
            sp.add_argument("--matrix", help='integer matrix literal, e.g. "[[2,1],[1,1]]"')
        sp.add_argument("--sequence", type=int, metavar="N")
        sp.add_argument("--congruence", type=int, metavar="N")
        if kind != "abelian":
            sp.add_argument("--tbft", type=int, metavar="N")
            sp.add_argument("--properties", action="store_true")
        if kind != "finite":
            sp.add_argument("--separate", action="store_true")
        if kind == "extension":
            sp.add_argument("--certify", action="store_true")
        common(sp)

    sp = sub.add_parser("corpus")
    sp.add_argument("--suite", choices=["smoke", "full"], default="smoke")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--corpus-dir", help="directory of job files (default: the bundled corpus)")
    common(sp)
    return p


def _job_from_args(a) -> JobSpec:
    cmds = []
    for name in ("sequence", "congruence", "tbft"):
        v = getattr(a, name, None)
        if v is not None:
            if v < 1:
                raise InputError(f"--{name} needs a positive integer")
            cmds.append((name, v))
    for name in ("separate", "certify", "properties"):
        if getattr(a, name, False):
            cmds.append((name, None))
    if a.kind != "abelian" and not a.group:
        raise InputError("--group is required")
    return JobSpec(kind=a.kind, group=a.group, endo=a.endo, matrix=getattr(a, "matrix", None), commands=cmds,
                   name=a.kind)


def _emit(text, out):
    if out:
        Path(out).write_text(text + ("" if text.endswith("\n") else "\n"))
    else:
        sys.stdout.write(text + ("" if text.endswith("\n") else "\n"))


def main(argv=None) -> int:
    a = _parser().parse_args(argv)
    if a.kind == "corpus":
        return _main_corpus(a)
    try:
        job = _job_from_args(a)
    except TBFError as exc:
        _emit(json.dumps({"ok": False, "exit_code": EXIT_INPUT, "error": _error_record(exc)}), a.out)
        return EXIT_INPUT
    res = run_job(job)
    _emit(render(res, a.format), a.out)
    if res.error and a.format == "table":
        print(json.dumps(res.error), file=sys.stderr)
    return res.exit_code


def _main_corpus(a) -> int:
    try:
        results, criteria, notes = run_corpus(a.suite, a.corpus_dir, a.workers)
    except TBFError as exc:
        _emit(json.dumps({"ok": False, "exit_code": EXIT_INPUT, "error": _error_record(exc)}), a.out)
        return EXIT_INPUT
    for n in notes:
        print(f"warning: {n}", file=sys.stderr)
    ok = all(r.ok for r in results) and all(c.passed for c in criteria)
    if a.format == "json":
        text = json.dumps({
            "suite": a.suite,
            "ok": ok,
            "jobs": [r.to_json() for r in results],
            "criteria": [c.to_json() for c in criteria],
            "warnings": notes,
        }, indent=2)
    elif a.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["item", "passed", "seconds"])
        for r in results:
            w.writerow([r.name, r.ok, f"{r.seconds:.3f}"])
        for c in criteria:
            w.writerow([c.key, c.passed, f"{c.seconds:.3f}"])
        text = buf.getvalue()
    else:
        lines = [f"corpus: {len(results)} jobs"]
        for r in results:
            status = "PASS" if r.ok else f"FAIL (exit {r.exit_code})"
            lines.append(f"[{status}] job {r.name} ({r.seconds:.2f}s)")
        lines += [c.line() for c in criteria]
        lines.append("all passed" if ok else "FAILURES present")
        text = "\n".join(lines)
    _emit(text, a.out)
    if not ok:
        return EXIT_INPUT if any(r.exit_code == EXIT_INPUT for r in results) else EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
