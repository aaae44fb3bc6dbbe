"""Grasp models, motion planners and the edge oracle."""
