"""Operator scripts for timing and inspecting valuation runs."""
