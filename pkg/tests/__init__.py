"""Test suite for the torus bundle classifier."""
