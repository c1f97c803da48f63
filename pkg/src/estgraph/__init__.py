"""Exponential start time clustering, spanners and hopsets."""
