"""
Analytics over identity sweeps and numerical convergence studies.
"""
import logging
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from identities import IdentityReport, IdentityStatus

# Configure logging
logger = logging.getLogger(__name__)

STATUSES = [status.value for status in IdentityStatus]


class VerificationAnalytics:
    """
    Class responsible for summarizing identity reports and convergence data.
    """

    def __init__(self, reports: Optional[List[IdentityReport]] = None):
        """Initialize the verification analytics."""
        self.reports = list(reports or [])

    def add_reports(self, reports: List[IdentityReport]):
        self.reports.extend(reports)

    def to_frame(self) -> pd.DataFrame:
        """
        One row per identity instance.

        Returns:
            DataFrame with columns name, dim, params, status, printed_agrees, note
        """
        rows = [
            {
                "name": report.name,
                "dim": report.dim,
                "params": ", ".join(f"{key}={value}" for key, value in report.params.items()),
                "status": report.status.value,
                "printed_agrees": report.printed_agrees,
                "note": report.note,
            }
            for report in self.reports
        ]
        return pd.DataFrame(rows, columns=["name", "dim", "params", "status", "printed_agrees", "note"])

    def summary(self) -> Dict[str, Any]:
        """
        Counts per identity and status.

        Returns:
            Dictionary with per-identity counts, totals and an all_hold flag
        """
        frame = self.to_frame()
        if frame.empty:
            counts = {}
        else:
            table = (
                frame.groupby(["name", "status"]).size()
                .unstack(fill_value=0)
                .reindex(columns=STATUSES, fill_value=0)
            )
            counts = {name: {status: int(n) for status, n in row.items()} for name, row in table.iterrows()}
        totals = {status: int((frame["status"] == status).sum()) for status in STATUSES}
        return {
            "identities": counts,
            "totals": totals,
            "instances": len(frame),
            "all_hold": totals[IdentityStatus.FAILS.value] == 0,
            "dims": sorted(int(d) for d in frame["dim"].unique()) if not frame.empty else [],
            "generated_at": datetime.now(timezone.utc).isoformat(),
        }

    def failures(self) -> pd.DataFrame:
        frame = self.to_frame()
        return frame[frame["status"] == IdentityStatus.FAILS.value].reset_index(drop=True)

    def disagreements(self) -> pd.DataFrame:
        """Instances whose computed form differs from the printed statement."""
        frame = self.to_frame()
        mask = frame["printed_agrees"].map(lambda value: value is not None and not value).astype(bool)
        return frame[mask & (frame["status"] == IdentityStatus.HOLDS.value)].reset_index(drop=True)

    @staticmethod
    def convergence_table(steps: Sequence[float], values: Sequence[float], target: Optional[float] = None) -> pd.DataFrame:
        """
        Error sequence and observed order for a refinement study.

        Args:
            steps: decreasing step sizes (or heights)
            values: measured quantity at each step
            target: exact value; when absent the values are errors already

        Returns:
            DataFrame with step, value, error and the local order between
            consecutive rows
        """
        steps = np.asarray(steps, dtype=float)
        values = np.asarray(values, dtype=float)
        errors = np.abs(values - target) if target is not None else np.abs(values)
        with np.errstate(divide="ignore", invalid="ignore"):
            local = np.log(errors[1:] / errors[:-1]) / np.log(steps[1:] / steps[:-1])
        return pd.DataFrame({
            "step": steps,
            "value": values,
            "error": errors,
            "local_order": np.concatenate([[np.nan], local]),
        })

    @staticmethod
    def fitted_order(steps: Sequence[float], errors: Sequence[float]) -> float:
        """Slope of log(error) against log(step) by least squares."""
        steps = np.asarray(steps, dtype=float)
        errors = np.asarray(errors, dtype=float)
        keep = errors > 0
        if keep.sum() < 2:
            return float("nan")
        slope, _ = np.polyfit(np.log(steps[keep]), np.log(errors[keep]), 1)
        return float(slope)
