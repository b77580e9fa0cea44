"""Command-line front end. Every command prints a JSON report and exits 0 iff all checks pass."""

from __future__ import annotations

import json
import os
import sys
import time
from fractions import Fraction
from typing import List

import click

from . import acceptance
from .acceptance import Check
from .config import CapExceeded
from .gegenbauer import CertificateError, certify_code_bound, certify_design_bound, harm_dim
from .harmonic import aut_group_of_root_system, molien_harmonic_dims, p6, trivial_group
from .lattice import enumerate_shell, harmonic_strength, jacobi_count, odd_divisor_sum, p6_sum
from .qseries import (
    TAU2_PAIRS,
    congruence_scan,
    prime_nonvanishing_and_deligne_check,
    deligne_coefficient_bound,
    eta_quotient_coefficients,
    hecke_crosscheck,
    nonvanishing_scan,
    tau2_table,
    theta_scalar,
    theta_weighted,
)
from .quaternion import certify_orbit_is_root_copy, orbit_decomposition, subgroup_N_matrices


class Report:
    def __init__(self, command: str, params: dict):
        self.command = command
        self.params = params
        self.checks: List[Check] = []
        self.start = time.perf_counter()

    def add(self, name: str, passed: bool, value) -> None:
        self.checks.append(Check(name, bool(passed), str(value)))

    def extend(self, checks) -> None:
        self.checks.extend(checks)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def emit(self, table: bool) -> None:
        elapsed = int((time.perf_counter() - self.start) * 1000)
        if table:
            click.echo(f"{self.command} {' '.join(f'{k}={v}' for k, v in self.params.items())}")
            width = max((len(c.name) for c in self.checks), default=0)
            for c in self.checks:
                click.echo(f"  {'PASS' if c.passed else 'FAIL'}  {c.name.ljust(width)}  {c.value}")
            click.echo(f"  {sum(c.passed for c in self.checks)}/{len(self.checks)} passed in {elapsed} ms")
        else:
            doc = {
                "command": self.command,
                "params": self.params,
                "checks": [c.as_json() for c in self.checks],
                "elapsed_ms": elapsed,
            }
            click.echo(json.dumps(doc, indent=2))
        sys.exit(0 if self.passed else 1)


class RationalType(click.ParamType):
    name = "rational"

    def convert(self, value, param, ctx):
        if isinstance(value, Fraction):
            return value
        try:
            return Fraction(str(value))
        except (ValueError, ZeroDivisionError):
            self.fail(f"{value!r} is not a rational number", param, ctx)


@click.group()
@click.option("--table", "table", is_flag=True, help="Human-readable table instead of JSON.")
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Worker processes (default: CPU count).")
@click.pass_context
def main(ctx, table, threads):
    """Exact verification tools for D4 shells as spherical designs."""
    ctx.obj = {"table": table, "threads": threads or os.cpu_count() or 1}


def _emit(ctx, report: Report) -> None:
    report.emit(ctx.obj["table"])


def _capped(fn):
    """Turn a cap violation into a clean CLI error."""

    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except CapExceeded as exc:
            raise click.ClickException(str(exc))

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@main.command()
@click.option("--m", "m", type=click.IntRange(min=1), required=True)
@click.option("--export", "export", type=click.Path(dir_okay=False, writable=True), default=None)
@click.pass_context
@_capped
def shell(ctx, m, export):
    """Enumerate the 2m-shell of D4."""
    report = Report("shell", {"m": m, "export": export})
    s = enumerate_shell(m)
    report.add("size equals 24 * odd divisor sum of 2m", len(s) == jacobi_count(m), len(s))
    if export:
        s.export(export)
        report.add("exported", True, export)
    _emit(ctx, report)


@main.command()
@click.option("--m", "m", type=click.IntRange(min=1), required=True)
@click.option("--max-degree", "max_degree", type=click.IntRange(min=0), required=True)
@click.pass_context
@_capped
def design(ctx, m, max_degree):
    """Harmonic strength of the 2m-shell and the degree-6 cross-check."""
    report = Report("design", {"m": m, "max_degree": max_degree})
    s = enumerate_shell(m)
    strength = sorted(harmonic_strength(s, max_degree))
    expected = {ell for ell in (2, 4, 10) if ell <= max_degree}
    report.add("harmonic strength contains {2, 4, 10}", expected <= set(strength), "{" + ", ".join(map(str, strength)) + "}")
    tau = tau2_table(m)[m]
    total = p6_sum(s)
    report.add("P6 shell sum = -192 tau2(m)", total == -192 * tau, total)
    _emit(ctx, report)


@main.command("lp-certify")
@click.option("--a1", "a1", type=RationalType(), default=Fraction(0), show_default=True)
@click.pass_context
def lp_certify(ctx, a1):
    """Re-verify both LP certificates."""
    if a1 < 0:
        raise click.BadParameter(f"a1 must be nonnegative, got {a1}", param_hint="--a1")
    report = Report("lp-certify", {"a1": str(a1)})
    for build in (certify_design_bound, lambda: certify_code_bound(a1)):
        try:
            cert = build()
        except CertificateError as exc:
            report.add("certificate", False, exc)
            continue
        for name, ok in cert.checks.items():
            report.add(f"{cert.name}: {name}", ok, "")
        report.add(f"{cert.name}: F(1)", True, cert.value_at_one)
        report.add(f"{cert.name}: f0", True, cert.f0)
        report.add(f"{cert.name}: bound", cert.bound == 12, cert.bound)
    _emit(ctx, report)


@main.command()
@click.option("--m", "m", type=click.IntRange(min=1), required=True)
@click.pass_context
@_capped
def decompose(ctx, m):
    """Split the 2m-shell into right unit orbits and certify each one."""
    report = Report("decompose", {"m": m})
    try:
        dec = orbit_decomposition(enumerate_shell(m))
    except AssertionError as exc:
        report.add("orbit decomposition", False, exc)
        _emit(ctx, report)
    report.add("orbit count = odd divisor sum of 2m", len(dec) == odd_divisor_sum(2 * m), len(dec))
    for k, orbit in enumerate(dec.orbits):
        rep = tuple(orbit[0].tolist())
        try:
            ok, detail = certify_orbit_is_root_copy(orbit, m), "root-system copy"
        except AssertionError as exc:
            ok, detail = False, exc
        report.add(f"orbit {k} of {rep}", ok, detail)
    _emit(ctx, report)


@main.command()
@click.option("--group", "group", type=click.Choice(["wf4", "n", "trivial"]), required=True)
@click.option("--max-degree", "max_degree", type=click.IntRange(min=0), required=True)
@click.pass_context
def molien(ctx, group, max_degree):
    """Dimensions of invariant harmonic polynomials."""
    report = Report("molien", {"group": group, "max_degree": max_degree})
    if group == "wf4":
        G = aut_group_of_root_system()
        dims = molien_harmonic_dims(G, max_degree)
        n = min(len(dims), len(acceptance.WF4_HARMONIC_MOLIEN))
        report.add("group order 1152", len(G) == 1152, len(G))
        report.add(f"dims match reference for l <= {n - 1}", tuple(dims[:n]) == acceptance.WF4_HARMONIC_MOLIEN[:n], "")
    elif group == "n":
        G = subgroup_N_matrices()
        dims = molien_harmonic_dims(G, max_degree)
        report.add("group order 24", len(G) == 24, len(G))
        ref = {ell: v for ell, v in acceptance.N_HARMONIC_MOLIEN.items() if ell <= max_degree}
        report.add("dims match reference", all(dims[ell] == v for ell, v in ref.items()), "")
    else:
        G = trivial_group()
        dims = molien_harmonic_dims(G, max_degree)
        report.add("dims equal (l+1)^2", dims == [harm_dim(4, ell) for ell in range(max_degree + 1)], "")
    report.add("dims", True, "[" + ", ".join(map(str, dims)) + "]")
    _emit(ctx, report)


@main.command()
@click.argument("what", type=click.Choice(["tau2", "theta", "scan"]))
@click.option("--bound", "bound", type=click.IntRange(min=1), required=True)
@click.option("--out", "out", type=click.Path(dir_okay=False, writable=True), default=None)
@click.option("--method", "method", type=click.Choice(["exact", "modular"]), default="exact", show_default=True)
@click.pass_context
@_capped
def qseries(ctx, what, bound, out, method):
    """tau2 tables, theta identities and tau2 scans."""
    report = Report("qseries", {"what": what, "bound": bound, "method": method, "out": out})
    if what == "tau2":
        table = tau2_table(bound, method)
        k = min(bound, 5)
        report.add(f"tau2(1..{k}) match reference", table.values[:k] == acceptance.TAU2_FIRST[:k], list(table.values[:k]))
        if bound >= 15:
            for name, ok in hecke_crosscheck(table).items():
                report.add(name, ok, "")
        if out:
            table.export(out)
            report.add("exported", True, out)
    elif what == "theta":
        try:
            theta_scalar(bound)
            report.add(f"theta_D4 = 2 E2(2z) - E2(z) to order {bound}", True, "")
        except AssertionError as exc:
            report.add(f"theta_D4 = 2 E2(2z) - E2(z) to order {bound}", False, exc)
        weighted = theta_weighted(p6(), bound)
        tau = tau2_table(bound, method)
        diff = weighted + tau.series().scale(192)
        first = next((n for n, c in enumerate(diff.coeffs) if c), None)
        report.add(f"theta_D4,P6 = -192 eta^8 eta(2.)^8 to order {bound}", first is None, f"first difference {first}")
    else:
        table = tau2_table(bound, method)
        if method == "exact" and bound <= 2000:
            # cheap cross-check of the modular path where it overlaps
            modular = eta_quotient_coefficients(TAU2_PAIRS, bound, "modular", deligne_coefficient_bound(bound))
            report.add("exact and modular tables agree", modular.coeffs[1:] == table.values, "")
        cong = congruence_scan(table, bound)
        report.add("tau2(p) = p(p+1) mod 3 and 5", cong.passed, f"checked={cong.checked} violations={cong.violations}")
        zero = nonvanishing_scan(table, bound)
        report.add("tau2(m) != 0", zero is None, f"first zero={zero}")
        cor, deligne = prime_nonvanishing_and_deligne_check(table, bound)
        report.add("tau2(p) != 0 for p != -1 mod 15", cor.passed, f"checked={cor.checked}")
        report.add("tau2(p)^2 <= 4 p^7", deligne.passed, f"checked={deligne.checked}")
    _emit(ctx, report)


@main.command("verify-all")
@click.option("--profile", "profile", type=click.Choice(list(acceptance.PROFILES)), default="quick", show_default=True)
@click.pass_context
def verify_all(ctx, profile):
    """Run every acceptance criterion."""
    report = Report("verify-all", {"profile": profile})
    for number, checks, ms in acceptance.verify_all(profile, ctx.obj["threads"]):
        title = acceptance.CRITERIA[number][0]
        report.extend(Check(f"[{number}] {title}: {c.name}", c.passed, c.value) for c in checks)
    _emit(ctx, report)


if __name__ == "__main__":
    main()
