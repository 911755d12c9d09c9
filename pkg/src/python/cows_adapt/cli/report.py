"""
Run report written by ``--report``.
"""

from typing import List, Optional

import psutil
import yaml
from pydantic import BaseModel, Field

from ..config import CowsConfig


class Bounds(BaseModel):
    max_states: int
    max_depth: Optional[int] = None
    keep_tau: bool = False
    workers: int = 1


class VerdictEntry(BaseModel):
    name: str
    formula: str
    verdict: str
    sound: bool = True
    evidence: List[str] = Field(default_factory=list)


class RunReport(BaseModel):
    """
    Summary of one explore or check run.

    The YAML form is the machine-readable one; its keys are documented in
    ``docs/reference/report-schema.md`` and only ever grow.
    """

    schema_version: int = CowsConfig.Report.SCHEMA_VERSION
    command: str
    model: str
    bounds: Bounds
    states: int = 0
    transitions: int = 0
    truncated: str = "none"
    diagnostics: List[str] = Field(default_factory=list)
    verdicts: List[VerdictEntry] = Field(default_factory=list)
    duration_seconds: float = 0.0
    peak_rss_bytes: Optional[int] = None

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.model_dump(), sort_keys=False, default_flow_style=False)

    def to_text(self) -> str:
        depth = self.bounds.max_depth if self.bounds.max_depth is not None else "unbounded"
        lines = [
            f"{self.command} {self.model}",
            f"  bounds: max-states={self.bounds.max_states} max-depth={depth} "
            f"keep-tau={str(self.bounds.keep_tau).lower()} workers={self.bounds.workers}",
            f"  states: {self.states}",
            f"  transitions: {self.transitions}",
            f"  truncated: {self.truncated}",
        ]
        for diagnostic in self.diagnostics:
            lines.append(f"  warning: {diagnostic}")
        for entry in self.verdicts:
            flag = "" if entry.sound else " (unsound)"
            lines.append(f"  {entry.name}: {entry.verdict}{flag}")
            lines.extend(f"    {line}" for line in entry.evidence)
        lines.append(f"  duration: {self.duration_seconds:.3f}s")
        if self.peak_rss_bytes is not None:
            lines.append(f"  peak rss: {self.peak_rss_bytes} bytes")
        return "\n".join(lines) + "\n"


def peak_rss_bytes() -> Optional[int]:
    """Resident set size of this process, or None where psutil cannot tell."""
    try:
        return psutil.Process().memory_info().rss
    except (psutil.Error, OSError):
        return None
