"""Regime, stability, barrier and sliding-window analysis of fitted models."""
