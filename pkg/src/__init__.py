"""PUCK potential analyzer: simulation, estimation and regime scanning of price series."""

__version__ = "0.1.0"
