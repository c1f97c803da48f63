"""Generators, experiment runner and verifiers."""
from .experiments import ExperimentConfig, report_json, report_text, run_experiment
from .generators import MODELS, generate_graph
from .verify import ArtifactMismatch, VerificationReport, verify

__all__ = [
    "ExperimentConfig", "run_experiment", "report_json", "report_text",
    "generate_graph", "MODELS", "verify", "VerificationReport", "ArtifactMismatch",
]
