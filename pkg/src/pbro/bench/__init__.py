"""Experiment plans, deterministic runner, and CSV/SVG reporting."""

from .plan import ALGORITHMS, ExperimentPlan, RunRecord, parse_plan, parse_plan_file, resolve_init
from .report import CSV_HEADER, emit_csv, emit_svg_plot
from .runner import SummaryRow, run_experiment, run_single, summarize
