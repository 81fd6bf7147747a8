"""Runner for the bundled golden fixtures.

``manifest.json`` lists fixtures; each names an instance file, an assignment
file and a list of checks.  A check may point at a different instance (for
example the truthful profile when scoring a misreport outcome).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from pseudomarket import errors, rules
from pseudomarket.analysis.birkhoff import birkhoff_decompose
from pseudomarket.analysis.properties import check_envy_free
from pseudomarket.hz import verify_hz
from pseudomarket.io import load_assignment, load_instance, parse_rational, read_json
from pseudomarket.model import utility_vector
from pseudomarket.nb import nb_leximin_certificate
from pseudomarket.welfare import ceei_prices_from_mnw, mnw_kkt_check


def default_directory() -> Path:
    return Path(str(resources.files("pseudomarket") / "fixtures"))


@dataclass
class FixtureResult:
    id: str
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> dict:
        return {"id": self.id, "ok": self.ok, "failures": self.failures}


def _rationals(values):
    return tuple(parse_rational(v) for v in values)


def _run_check(check, directory, inst, x) -> str | None:
    kind = check.get("check")
    if "instance" in check:
        inst = load_instance(directory / check["instance"])
    if kind == "solve":
        out, extra = rules.get_rule(check["rule"])(inst)
        if out != x:
            return f"rule {check['rule']} returned a different assignment"
        if "prices" in check and _rationals(extra["prices"]) != _rationals(check["prices"]):
            return f"rule {check['rule']} returned prices {extra['prices']}"
    elif kind == "hz":
        cert = verify_hz(inst, x, _rationals(check["prices"]))
        if cert.overall != check["expect"]:
            return f"hz verdict {cert.overall}, expected {check['expect']}"
    elif kind == "kkt":
        report = mnw_kkt_check(inst, x)
        if report.verdict != check["expect"]:
            return f"kkt verdict {report.verdict}, expected {check['expect']}"
        for key, got in (("u_minus", report.u_minus), ("multipliers", report.multipliers)):
            if key in check and got != _rationals(check[key]):
                return f"{key} mismatch"
        if "prices" in check and ceei_prices_from_mnw(inst, x, report) != _rationals(check["prices"]):
            return "CEEI prices mismatch"
    elif kind == "nb":
        cert = nb_leximin_certificate(inst, x)
        if cert.verdict != check["expect"]:
            return f"nb verdict {cert.verdict}, expected {check['expect']}"
    elif kind == "envy":
        report = check_envy_free(inst, x)
        if report.verdict != check["expect"]:
            return f"envy-free verdict {report.verdict}, expected {check['expect']}"
        if "witness" in check and [report.envier, report.envied] != check["witness"]:
            return f"envy witness {[report.envier, report.envied]}, expected {check['witness']}"
    elif kind == "utility":
        got = utility_vector(inst, x)[check["agent"]]
        if got != parse_rational(check["value"]):
            return f"agent {check['agent']} utility {got}, expected {check['value']}"
    elif kind == "utilities":
        if utility_vector(inst, x) != _rationals(check["values"]):
            return "utility vector mismatch"
    elif kind == "birkhoff":
        lottery = birkhoff_decompose(x)
        n = x.n
        if not lottery.reconstructs(x) or len(lottery) > n * n - 2 * n + 2:
            return "Birkhoff decomposition failed"
    else:
        return f"unknown check {kind!r}"
    return None


def run_fixtures(directory=None) -> list[FixtureResult]:
    directory = default_directory() if directory is None else Path(directory)
    if not directory.is_dir():
        raise errors.ValidationError(f"fixture directory {directory} not found")
    manifest = read_json(directory / "manifest.json")
    results = []
    for entry in manifest.get("fixtures", []):
        result = FixtureResult(entry.get("id", "?"))
        try:
            inst = load_instance(directory / entry["instance"])
            x = load_assignment(directory / entry["assignment"])
            for check in entry.get("checks", []):
                problem = _run_check(check, directory, inst, x)
                if problem:
                    result.failures.append(problem)
        except (errors.PseudomarketError, KeyError) as exc:
            result.failures.append(f"{type(exc).__name__}: {exc}")
        results.append(result)
    return results
