"""Pydantic request/response models shared by the HTTP API and the CLI.

The JSON envelope is the canonical machine format: floats are emitted with
Python's shortest round-trip representation and keys are sorted, so a fixed
configuration always serializes to identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from . import __version__
from .contrast import ContrastReport
from .sphere import RNG_ALGORITHM

CommandName = Literal["verify-quantum", "verify-hv", "contrast", "lemma-check", "all"]
ModelName = Literal["ks", "deterministic", "custom-file"]
OutputFormat = Literal["json", "csv", "text"]


class GridSpec(BaseModel):
    n_polar: int = Field(default=8, ge=2)
    n_azimuthal: int = Field(default=16, ge=5)


class RunOptions(BaseModel):
    """Everything needed to run one command; defaults match the CLI."""

    model_config = ConfigDict(protected_namespaces=())

    state: tuple[float, float, float] = (0.0, 0.0, 1.0)
    model: ModelName = "deterministic"
    model_file: Optional[str] = None
    grid: GridSpec = Field(default_factory=GridSpec)
    samples: int = Field(default=1_000_000, ge=1)
    seed: int = Field(default=42, ge=0)


class RunConfig(RunOptions):
    command: CommandName


class Metadata(BaseModel):
    seed: int
    rng_name: str = RNG_ALGORITHM
    grid: GridSpec
    version: str = __version__


class CheckResult(BaseModel):
    """One named pass/fail check with the numbers behind it."""

    name: str
    passed: bool
    observed: Optional[float] = None
    expected: Optional[float] = None
    tolerance: Optional[float] = None
    detail: str = ""


class DistributionCheckResult(BaseModel):
    theta: float
    phi: float
    model_probability: float
    born_probability: float
    deviation: float
    tolerance: float
    n_samples: Optional[int] = None
    passed: bool


class SpectrumCheckResult(BaseModel):
    model_label: str
    outcomes_checked: int
    violations: int
    passed: bool


class ContrastResults(BaseModel):
    model_config = ConfigDict(protected_namespaces=())

    quantum_value: float
    hv_value: float
    bounds: dict[str, float]
    errors_sigma: float
    bloch_norm_sq: float
    state_pure: bool
    gap_ratio: Optional[float] = None
    proposition_flags: dict[str, str]
    distribution_checks: list[DistributionCheckResult]
    spectrum_check: SpectrumCheckResult
    contradiction: bool
    verdict: str
    warnings: list[str]

    @classmethod
    def from_report(cls, report: ContrastReport) -> "ContrastResults":
        return cls(
            quantum_value=report.quantum_value,
            hv_value=report.hv_value,
            bounds={"quantum": report.quantum_bound, "hv": report.hv_bound},
            errors_sigma=report.hv_std_error,
            bloch_norm_sq=report.bloch_norm_sq,
            state_pure=report.state_pure,
            gap_ratio=report.gap_ratio,
            proposition_flags=dict(report.proposition_flags),
            distribution_checks=[
                DistributionCheckResult(
                    theta=c.direction.theta,
                    phi=c.direction.phi,
                    model_probability=c.model_probability,
                    born_probability=c.born_probability,
                    deviation=c.deviation,
                    tolerance=c.tolerance,
                    n_samples=c.n_samples,
                    passed=c.passed,
                )
                for c in report.distribution_checks
            ],
            spectrum_check=SpectrumCheckResult(
                model_label=report.spectrum_check.model_label,
                outcomes_checked=report.spectrum_check.outcomes_checked,
                violations=report.spectrum_check.violations,
                passed=report.spectrum_check.passed,
            ),
            contradiction=report.contradiction,
            verdict=report.verdict,
            warnings=list(report.warnings),
        )


class VerificationResults(BaseModel):
    passed: bool
    checks: list[CheckResult]
    values: dict[str, Optional[float]]


class LemmaResults(BaseModel):
    spaces_checked: int
    max_rearrangement_gap: float
    max_trace_gap: float
    failures: int
    passed: bool


class EnvelopeBase(BaseModel):
    command: str
    config: RunConfig
    metadata: Metadata


class ContrastEnvelope(EnvelopeBase):
    results: ContrastResults


class VerificationEnvelope(EnvelopeBase):
    results: VerificationResults


class LemmaEnvelope(EnvelopeBase):
    results: LemmaResults


class SuiteResults(BaseModel):
    quantum: VerificationResults
    hv: VerificationResults
    lemma: LemmaResults
    contrast: ContrastResults
    passed: bool


class SuiteEnvelope(EnvelopeBase):
    results: SuiteResults


ReportEnvelope = ContrastEnvelope | VerificationEnvelope | LemmaEnvelope | SuiteEnvelope


def emit_report(envelope: ReportEnvelope, fmt: OutputFormat = "json") -> bytes:
    """Serialize an envelope; byte-stable for fixed inputs."""
    if fmt == "json":
        payload = json.dumps(envelope.model_dump(mode="json"), indent=2, sort_keys=True)
        return (payload + "\n").encode()
    if fmt == "csv":
        return _emit_csv(envelope)
    if fmt == "text":
        return _emit_text(envelope)
    raise ValueError(f"unknown format {fmt!r}")


def _csv_bytes(header: list[str], rows: list[list[object]]) -> bytes:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue().encode()


def _emit_csv(envelope: ReportEnvelope) -> bytes:
    results = envelope.results
    if isinstance(results, ContrastResults):
        header = [
            "command", "quantum_value", "hv_value", "quantum_bound", "hv_bound",
            "errors_sigma", "bloch_norm_sq", "gap_ratio", "contradiction", "verdict",
        ]
        rows = [[
            envelope.command, repr(results.quantum_value), repr(results.hv_value),
            repr(results.bounds["quantum"]), repr(results.bounds["hv"]),
            repr(results.errors_sigma), repr(results.bloch_norm_sq),
            "" if results.gap_ratio is None else repr(results.gap_ratio),
            results.contradiction, results.verdict,
        ]]
        return _csv_bytes(header, rows)
    if isinstance(results, VerificationResults):
        header = ["command", "check", "passed", "observed", "expected", "tolerance", "detail"]
        rows = [
            [
                envelope.command, c.name, c.passed,
                "" if c.observed is None else repr(c.observed),
                "" if c.expected is None else repr(c.expected),
                "" if c.tolerance is None else repr(c.tolerance),
                c.detail,
            ]
            for c in results.checks
        ]
        return _csv_bytes(header, rows)
    if isinstance(results, LemmaResults):
        header = ["command", "spaces_checked", "max_rearrangement_gap", "max_trace_gap", "failures", "passed"]
        rows = [[
            envelope.command, results.spaces_checked, repr(results.max_rearrangement_gap),
            repr(results.max_trace_gap), results.failures, results.passed,
        ]]
        return _csv_bytes(header, rows)
    # suite: concatenate the section tables with a blank line between them
    parts = []
    for name in ("quantum", "hv", "lemma", "contrast"):
        section = getattr(results, name)
        sub = envelope.model_copy(update={"results": section, "command": f"{envelope.command}:{name}"})
        parts.append(_emit_csv(sub))
    return b"\n".join(parts)


def _text_lines(prefix: str, results) -> list[str]:
    lines: list[str] = []
    if isinstance(results, ContrastResults):
        lines.append(f"{prefix}quantum_value    {results.quantum_value!r}")
        lines.append(f"{prefix}quantum_bound    {results.bounds['quantum']!r}")
        lines.append(f"{prefix}hv_value         {results.hv_value!r}")
        lines.append(f"{prefix}hv_bound         {results.bounds['hv']!r}")
        lines.append(f"{prefix}errors_sigma     {results.errors_sigma!r}")
        lines.append(f"{prefix}bloch_norm_sq    {results.bloch_norm_sq!r}")
        lines.append(f"{prefix}state_pure       {results.state_pure}")
        gap = "n/a" if results.gap_ratio is None else repr(results.gap_ratio)
        lines.append(f"{prefix}gap_ratio        {gap}")
        for key, value in results.proposition_flags.items():
            lines.append(f"{prefix}proposition      {key:<24} {value}")
        for i, c in enumerate(results.distribution_checks):
            status = "pass" if c.passed else "FAIL"
            lines.append(
                f"{prefix}distribution[{i}]  {status}  model={c.model_probability:.6f} "
                f"born={c.born_probability:.6f} tol={c.tolerance:.2e}"
            )
        status = "pass" if results.spectrum_check.passed else "FAIL"
        lines.append(
            f"{prefix}spectrum_check   {status}  checked={results.spectrum_check.outcomes_checked} "
            f"violations={results.spectrum_check.violations}"
        )
        lines.append(f"{prefix}contradiction    {results.contradiction}")
        lines.append(f"{prefix}verdict          {results.verdict}")
        for warning in results.warnings:
            lines.append(f"{prefix}warning          {warning}")
    elif isinstance(results, VerificationResults):
        for c in results.checks:
            status = "pass" if c.passed else "FAIL"
            detail = f"  {c.detail}" if c.detail else ""
            lines.append(f"{prefix}{c.name:<28} {status}{detail}")
        for key, value in results.values.items():
            shown = "n/a" if value is None else repr(value)
            lines.append(f"{prefix}{key:<28} {shown}")
        lines.append(f"{prefix}{'passed':<28} {results.passed}")
    elif isinstance(results, LemmaResults):
        lines.append(f"{prefix}spaces_checked          {results.spaces_checked}")
        lines.append(f"{prefix}max_rearrangement_gap   {results.max_rearrangement_gap!r}")
        lines.append(f"{prefix}max_trace_gap           {results.max_trace_gap!r}")
        lines.append(f"{prefix}failures                {results.failures}")
        lines.append(f"{prefix}passed                  {results.passed}")
    else:  # SuiteResults
        for name in ("quantum", "hv", "lemma", "contrast"):
            lines.append(f"{prefix}[{name}]")
            lines.extend(_text_lines(prefix + "  ", getattr(results, name)))
        lines.append(f"{prefix}passed           {results.passed}")
    return lines


def _emit_text(envelope: ReportEnvelope) -> bytes:
    lines = [f"command          {envelope.command}"]
    meta = envelope.metadata
    lines.append(
        f"metadata         seed={meta.seed} rng={meta.rng_name} "
        f"grid=({meta.grid.n_polar},{meta.grid.n_azimuthal}) version={meta.version}"
    )
    lines.extend(_text_lines("", envelope.results))
    return ("\n".join(lines) + "\n").encode()
