"""Tests for the PUCK potential analyzer."""
